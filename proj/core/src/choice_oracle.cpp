#include "mccm/choice_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mccm/errors.hpp"

namespace mccm {
namespace {

constexpr double kSolveResidualTol = 1e-8;

void check_assortment(const ModelParams& model, const Assortment& s) {
  if (s.max_product() > model.n)
    throw DomainError("assortment " + s.str() + " has products beyond n=" +
                      std::to_string(model.n));
}

std::string pair_str(const Assortment& s, int origin) {
  std::ostringstream os;
  os << "(" << s.str() << ", origin " << origin << ")";
  return os.str();
}

}  // namespace

Eigen::MatrixXd absorption_probabilities(const ModelParams& model, const Assortment& s) {
  check_assortment(model, s);
  const int n = model.n;
  const std::vector<int> outcomes = s.outcomes();
  const int cols = static_cast<int>(outcomes.size());

  std::vector<int> transient;
  transient.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    if (!s.contains(i)) transient.push_back(i);
  const int t = static_cast<int>(transient.size());

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n + 1, cols);
  for (int c = 0; c < cols; ++c) p(outcomes[c], c) = 1.0;
  if (t == 0) return p;

  // (I - Q) X = R over the products outside S.
  Eigen::MatrixXd iq = Eigen::MatrixXd::Zero(t, t);
  Eigen::MatrixXd r(t, cols);
  for (int a = 0; a < t; ++a) {
    for (int b = 0; b < t; ++b) iq(a, b) = (a == b ? 1.0 : 0.0) - model.rho(transient[a], transient[b]);
    for (int c = 0; c < cols; ++c) r(a, c) = model.rho(transient[a], outcomes[c]);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(iq);
  Eigen::MatrixXd x = lu.solve(r);
  double residual = (iq * x - r).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > kSolveResidualTol) {
    std::ostringstream os;
    os << "absorption solve for " << s.str() << " failed (residual " << residual
       << "); the product block is likely reducible";
    throw SingularSystem(os.str());
  }

  for (int a = 0; a < t; ++a) p.row(transient[a]) = x.row(a);
  return p;
}

Eigen::VectorXd exact_choice_probs(const ModelParams& model, const Assortment& s) {
  if (model.lambda.size() != model.n + 1)
    throw DomainError("model lambda has wrong length");
  Eigen::MatrixXd p = absorption_probabilities(model, s);
  return p.transpose() * model.lambda;
}

ChoiceTable exact_choice_table(const ModelParams& model,
                               const std::vector<Assortment>& assortments) {
  ChoiceTable table(model.n);
  for (const Assortment& s : assortments) {
    if (table.contains(s)) continue;
    table.set(s, exact_choice_probs(model, s));
  }
  return table;
}

double conditional_direct(const ModelParams& model, const Assortment& s,
                          int origin, int outcome) {
  check_assortment(model, s);
  if (origin < 0 || origin > model.n)
    throw DomainError("origin state " + std::to_string(origin) + " out of range");
  if (origin == outcome) return 1.0;
  if (origin == 0 || s.contains(origin)) return 0.0;
  Eigen::MatrixXd p = absorption_probabilities(model, s);
  return p(origin, s.outcome_index(outcome));  // throws DomainError if outcome not in S_+
}

double conditional_from_tables(const ChoiceTable& table, const Assortment& s,
                               int origin, int outcome, double denom_tolerance) {
  if (origin < 0 || origin > table.n())
    throw DomainError("origin state " + std::to_string(origin) + " out of range");
  s.outcome_index(outcome);  // validate outcome ∈ S_+
  if (origin == outcome) return 1.0;
  if (origin == 0 || s.contains(origin)) return 0.0;

  const Assortment sup = s.with(origin);
  const double denom = table.pi(sup, origin);
  if (denom <= denom_tolerance) {
    std::ostringstream os;
    os << "pi(" << origin << ", " << sup.str() << ") = " << denom
       << " is too small to condition on";
    throw ZeroDenominator(os.str());
  }
  double v = (table.pi(s, outcome) - table.pi(sup, outcome)) / denom;
  return std::clamp(v, 0.0, 1.0);
}

namespace {

ConditionalTable build_conditional_impl(const ChoiceTable& table,
                                        const std::vector<Assortment>& assortments,
                                        double denom_tolerance, bool lenient,
                                        std::vector<std::string>* failures) {
  const int n = table.n();
  ConditionalTable cond(n);
  std::vector<std::string> missing;
  std::vector<std::string> zero_denom;

  for (const Assortment& s : assortments) {
    if (cond.contains(s)) continue;
    const std::vector<int> outcomes = s.outcomes();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, static_cast<Eigen::Index>(outcomes.size()));
    for (std::size_t c = 0; c < outcomes.size(); ++c) m(outcomes[c], static_cast<Eigen::Index>(c)) = 1.0;

    for (int origin = 1; origin <= n; ++origin) {
      if (s.contains(origin)) continue;
      try {
        for (std::size_t c = 0; c < outcomes.size(); ++c)
          m(origin, static_cast<Eigen::Index>(c)) =
              conditional_from_tables(table, s, origin, outcomes[c], denom_tolerance);
      } catch (const MissingAssortment&) {
        missing.push_back(pair_str(s, origin));
        m.row(origin).setConstant(std::numeric_limits<double>::quiet_NaN());
      } catch (const ZeroDenominator&) {
        zero_denom.push_back(pair_str(s, origin));
        m.row(origin).setConstant(std::numeric_limits<double>::quiet_NaN());
      }
    }
    cond.set(s, std::move(m));
  }

  if (!lenient) {
    if (!missing.empty() || !zero_denom.empty())
      throw ConditionalBuildError(std::move(missing), std::move(zero_denom));
  } else {
    if (!missing.empty())  // lenient mode only tolerates denominator holes
      throw ConditionalBuildError(std::move(missing), std::move(zero_denom));
    if (failures)
      failures->insert(failures->end(), zero_denom.begin(), zero_denom.end());
  }
  return cond;
}

}  // namespace

ConditionalTable build_conditional_table(const ChoiceTable& table,
                                         const std::vector<Assortment>& assortments,
                                         double denom_tolerance) {
  return build_conditional_impl(table, assortments, denom_tolerance, false, nullptr);
}

ConditionalTable build_conditional_table_lenient(const ChoiceTable& table,
                                                 const std::vector<Assortment>& assortments,
                                                 double denom_tolerance,
                                                 std::vector<std::string>* failures) {
  return build_conditional_impl(table, assortments, denom_tolerance, true, failures);
}

}  // namespace mccm
