#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mccm {

/** Base class for every error thrown by this library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** An argument violates a documented precondition (bad n, r, mass, probabilities...). */
class DomainError : public Error {
 public:
  using Error::Error;
};

/** A file could not be read, written, or parsed. */
class IoError : public Error {
 public:
  using Error::Error;
};

/** A choice table lacks an assortment that the computation needs. */
class MissingAssortment : public Error {
 public:
  using Error::Error;
};

/** A conditional-probability table lacks an entry that a linear system needs. */
class MissingConditional : public Error {
 public:
  using Error::Error;
};

/** A conditional probability is undefined because its denominator is ~0. */
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/** A square solve failed or produced garbage beyond tolerance. */
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/** A least-squares system has numerical rank below its free unknown count. */
class UnderdeterminedSystem : public Error {
 public:
  using Error::Error;
};

/** A simulated walk hit the step cap before absorbing. */
class WalkLimitExceeded : public Error {
 public:
  using Error::Error;
};

/**
 * Aggregate failure from building a conditional table: lists every
 * (assortment, origin) pair that could not be filled, split by cause.
 */
class ConditionalBuildError : public Error {
 public:
  ConditionalBuildError(std::vector<std::string> missing,
                        std::vector<std::string> zero_denominator);

  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& zero_denominator() const { return zero_denominator_; }

 private:
  static std::string compose(const std::vector<std::string>& missing,
                             const std::vector<std::string>& zero_denominator);

  std::vector<std::string> missing_;
  std::vector<std::string> zero_denominator_;
};

}  // namespace mccm
