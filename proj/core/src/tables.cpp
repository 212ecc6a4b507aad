#include "mccm/tables.hpp"

#include <cmath>
#include <string>

#include "mccm/errors.hpp"
#include "mccm/model.hpp"

namespace mccm {
namespace {

// Loose storage gate; tight tolerances are asserted by producers and tests.
constexpr double kStorageSumTol = 1e-6;

void check_members(int n, const Assortment& s) {
  if (s.max_product() > n)
    throw DomainError("assortment " + s.str() + " has products beyond n=" +
                      std::to_string(n));
}

}  // namespace

ChoiceTable::ChoiceTable(int n) : n_(n) {
  if (n < 1) throw DomainError("choice table needs n >= 1");
}

void ChoiceTable::set(const Assortment& s, Eigen::VectorXd probs) {
  check_members(n_, s);
  if (probs.size() != s.size() + 1)
    throw DomainError("outcome vector for " + s.str() + " must have length |S|+1");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (!std::isfinite(probs[k]) || probs[k] < -kStochasticTol)
      throw DomainError("outcome vector for " + s.str() + " is not a distribution");
    sum += probs[k];
  }
  if (std::abs(sum - 1.0) > kStorageSumTol)
    throw DomainError("outcome vector for " + s.str() + " sums to " +
                      std::to_string(sum));
  entries_[s] = std::move(probs);
}

const Eigen::VectorXd& ChoiceTable::probs(const Assortment& s) const {
  auto it = entries_.find(s);
  if (it == entries_.end())
    throw MissingAssortment("choice table has no entry for " + s.str());
  return it->second;
}

double ChoiceTable::pi(const Assortment& s, int outcome) const {
  return probs(s)[s.outcome_index(outcome)];
}

ConditionalTable::ConditionalTable(int n) : n_(n) {
  if (n < 1) throw DomainError("conditional table needs n >= 1");
}

void ConditionalTable::set(const Assortment& s, Eigen::MatrixXd conditionals) {
  check_members(n_, s);
  if (conditionals.rows() != n_ + 1 || conditionals.cols() != s.size() + 1)
    throw DomainError("conditional matrix for " + s.str() +
                      " must be (n+1) x (|S|+1)");
  entries_[s] = std::move(conditionals);
}

const Eigen::MatrixXd& ConditionalTable::matrix(const Assortment& s) const {
  auto it = entries_.find(s);
  if (it == entries_.end())
    throw MissingConditional("conditional table has no entry for " + s.str());
  return it->second;
}

double ConditionalTable::value(const Assortment& s, int origin, int outcome) const {
  const Eigen::MatrixXd& m = matrix(s);
  if (origin < 0 || origin > n_)
    throw DomainError("origin state " + std::to_string(origin) + " out of range");
  double v = m(origin, s.outcome_index(outcome));
  if (std::isnan(v))
    throw ZeroDenominator("conditional probabilities for origin " +
                          std::to_string(origin) + " in " + s.str() +
                          " were unavailable (zero denominator)");
  return v;
}

}  // namespace mccm
