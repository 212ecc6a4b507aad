#pragma once

#include <cstddef>
#include <map>

#include <Eigen/Dense>

#include "mccm/assortment.hpp"

namespace mccm {

/** Choice-probability vectors produced by this library sum to 1 within this. */
inline constexpr double kChoiceSumTol = 1e-10;

/**
 * Choice probabilities for a collection of assortments over a fixed horizon n.
 *
 * Each entry maps an assortment S to the outcome distribution over S_+ in
 * canonical order (no-purchase first, then members ascending). Entries are
 * gated loosely on insertion (finite, nonnegative, sum within 1e-6) so that
 * Monte Carlo estimates and hand-authored files are storable; exact tables
 * produced by the oracle satisfy the tighter 1e-10 sum tolerance.
 */
class ChoiceTable {
 public:
  ChoiceTable() = default;
  explicit ChoiceTable(int n);

  int n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const Assortment& s) const { return entries_.count(s) != 0; }

  void set(const Assortment& s, Eigen::VectorXd probs);

  /** Full outcome distribution for S; throws MissingAssortment if absent. */
  const Eigen::VectorXd& probs(const Assortment& s) const;

  /** Single choice probability pi(outcome, S). */
  double pi(const Assortment& s, int outcome) const;

  /** Entries in (size, lex) order, the on-disk record order. */
  const std::map<Assortment, Eigen::VectorXd, SizeLexLess>& entries() const {
    return entries_;
  }

 private:
  int n_ = 0;
  std::map<Assortment, Eigen::VectorXd, SizeLexLess> entries_;
};

/**
 * Conditional choice probabilities for a collection of assortments.
 *
 * For each assortment S the table holds a (n+1) x (|S|+1) matrix whose
 * (k, j) entry is the probability that outcome j in S_+ is reached before
 * the rest of S_+ when the walk starts at state k. Rows with origin in S_+
 * form an exact identity block. A row may be a NaN hole when it was
 * unavailable at build time (lenient mode); reading a hole throws
 * ZeroDenominator.
 */
class ConditionalTable {
 public:
  ConditionalTable() = default;
  explicit ConditionalTable(int n);

  int n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const Assortment& s) const { return entries_.count(s) != 0; }

  void set(const Assortment& s, Eigen::MatrixXd conditionals);

  const Eigen::MatrixXd& matrix(const Assortment& s) const;

  /** Conditional probability of `outcome` given start state `origin`. */
  double value(const Assortment& s, int origin, int outcome) const;

  const std::map<Assortment, Eigen::MatrixXd, SizeLexLess>& entries() const {
    return entries_;
  }

 private:
  int n_ = 0;
  std::map<Assortment, Eigen::MatrixXd, SizeLexLess> entries_;
};

}  // namespace mccm
