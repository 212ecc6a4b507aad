#include "mccm/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "mccm/errors.hpp"

namespace mccm {
namespace {

// Rethrow preserving the concrete error type, with the system name prefixed.
[[noreturn]] void rethrow_tagged(const std::string& key, const Error& e) {
  const std::string msg = "system " + key + ": " + e.what();
  if (dynamic_cast<const ZeroDenominator*>(&e)) throw ZeroDenominator(msg);
  if (dynamic_cast<const MissingConditional*>(&e)) throw MissingConditional(msg);
  if (dynamic_cast<const MissingAssortment*>(&e)) throw MissingAssortment(msg);
  if (dynamic_cast<const UnderdeterminedSystem*>(&e)) throw UnderdeterminedSystem(msg);
  if (dynamic_cast<const SingularSystem*>(&e)) throw SingularSystem(msg);
  if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
  throw Error(msg);
}

/**
 * Cleanup for a recovered probability vector. Negative entries above the
 * trigger are solver noise around true zeros and snap to 0; anything at or
 * below the trigger means real distortion and is reported as a projection.
 * Either way the vector is rescaled to sum exactly to one (least-squares
 * solutions of inconsistent systems drift off the simplex), except when it
 * carries no positive mass at all. Returns whether the projection fired.
 */
bool project_distribution(Eigen::VectorXd& v) {
  if (v.size() == 0) return false;
  const double min = v.minCoeff();
  const bool fired = min < kProjectionTrigger;
  if (min < 0.0)
    for (Eigen::Index k = 0; k < v.size(); ++k)
      if (v[k] < 0.0) v[k] = 0.0;
  const double sum = v.sum();
  if (sum > 0.0 && sum != 1.0) v /= sum;
  return fired;
}

LinearSystem make_system_skeleton(int n) {
  LinearSystem sys;
  sys.columns.resize(static_cast<std::size_t>(n) + 1);
  std::iota(sys.columns.begin(), sys.columns.end(), 0);
  return sys;
}

}  // namespace

LinearSystem build_rho_system(const ConditionalTable& cond, int product,
                              const std::vector<Assortment>& fan) {
  const int n = cond.n();
  if (product < 1 || product > n)
    throw DomainError("no transition row for state " + std::to_string(product));

  Eigen::Index rows = 0;
  for (const Assortment& s : fan) rows += s.size() + 1;

  LinearSystem sys = make_system_skeleton(n);
  sys.coeffs.resize(rows, n + 1);
  sys.rhs.resize(rows);

  Eigen::Index row = 0;
  for (const Assortment& s : fan) {
    if (s.contains(product))
      throw DomainError("fan assortment " + s.str() + " must exclude product " +
                        std::to_string(product));
    if (!cond.contains(s))
      throw MissingConditional("no conditional probabilities for " + s.str());
    for (int j : s.outcomes()) {
      for (int k = 0; k <= n; ++k) sys.coeffs(row, k) = cond.value(s, k, j);
      sys.rhs[row] = cond.value(s, product, j);
      ++row;
    }
  }

  LinearSystem::Constraint pin;
  pin.coeffs = Eigen::VectorXd::Zero(n + 1);
  pin.coeffs[product] = 1.0;
  pin.rhs = 0.0;
  LinearSystem::Constraint sum;
  sum.coeffs = Eigen::VectorXd::Ones(n + 1);
  sum.rhs = 1.0;
  sys.constraints = {pin, sum};
  return sys;
}

LinearSystem build_lambda_system(const ConditionalTable& cond, const ChoiceTable& table,
                                 const std::vector<Assortment>& assortments) {
  const int n = cond.n();
  Eigen::Index rows = 0;
  for (const Assortment& s : assortments) rows += s.size() + 1;

  LinearSystem sys = make_system_skeleton(n);
  sys.coeffs.resize(rows, n + 1);
  sys.rhs.resize(rows);

  Eigen::Index row = 0;
  for (const Assortment& s : assortments) {
    if (!cond.contains(s))
      throw MissingConditional("no conditional probabilities for " + s.str());
    for (int j : s.outcomes()) {
      for (int k = 0; k <= n; ++k) sys.coeffs(row, k) = cond.value(s, k, j);
      sys.rhs[row] = table.pi(s, j);
      ++row;
    }
  }

  LinearSystem::Constraint sum;
  sum.coeffs = Eigen::VectorXd::Ones(n + 1);
  sum.rhs = 1.0;
  sys.constraints = {sum};
  return sys;
}

namespace {

RecoveryReport recover_impl(const ChoiceTable& table, const RecoveryPlan& plan,
                            const ModelParams* truth, const RecoverOptions& options) {
  const int n = plan.n;
  if (table.n() != n)
    throw DomainError("choice table is for n=" + std::to_string(table.n()) +
                      " but the plan expects n=" + std::to_string(n));
  if (truth && truth->n != n) throw DomainError("ground-truth model has mismatched n");
  for (const Assortment& s : plan.required_assortments)
    if (!table.contains(s))
      throw MissingAssortment("choice table is missing required assortment " + s.str());

  std::vector<Assortment> size_r;
  for (const Assortment& s : plan.required_assortments)
    if (s.size() == plan.r) size_r.push_back(s);

  RecoveryReport report;
  report.rank_threshold = options.rank_tolerance;

  ConditionalTable cond;
  if (options.fail_fast) {
    cond = build_conditional_table(table, size_r, options.denom_tolerance);
  } else {
    std::vector<std::string> holes;
    cond = build_conditional_table_lenient(table, size_r, options.denom_tolerance, &holes);
    // Holes surface later as per-system errors only if a system reads them.
  }

  ModelParams rec;
  rec.n = n;
  rec.lambda = Eigen::VectorXd::Zero(n + 1);
  rec.rho = Eigen::MatrixXd::Zero(n + 1, n + 1);
  rec.rho(0, 0) = 1.0;

  auto run_system = [&](const std::string& key, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      if (options.fail_fast) rethrow_tagged(key, e);
      report.per_system_errors[key] = e.what();
    }
  };

  for (int i = 1; i <= n; ++i) {
    run_system(std::to_string(i), [&] {
      LinearSystem sys = build_rho_system(cond, i, plan.fans[i]);
      SolveResult res = solve_system(sys, options.rank_tolerance);
      rec.rho.row(i) = res.solution;
      report.per_system_residual[std::to_string(i)] = res.residual;
      report.per_system_rank[std::to_string(i)] = res.rank;
    });
  }
  run_system("lambda", [&] {
    LinearSystem sys = build_lambda_system(cond, table, plan.lambda_assortments);
    SolveResult res = solve_system(sys, options.rank_tolerance);
    rec.lambda = res.solution;
    report.per_system_residual["lambda"] = res.residual;
    report.per_system_rank["lambda"] = res.rank;
  });

  if (project_distribution(rec.lambda)) report.projected.push_back("lambda");
  for (int i = 1; i <= n; ++i) {
    Eigen::VectorXd row = rec.rho.row(i);
    if (project_distribution(row)) report.projected.push_back("rho[" + std::to_string(i) + "]");
    rec.rho.row(i) = row;
  }

  report.validation = validate(rec);
  report.recovered = std::move(rec);
  if (truth) report.max_param_error = max_param_error(report.recovered, *truth);
  return report;
}

}  // namespace

RecoveryReport recover(const ChoiceTable& table, const RecoveryPlan& plan,
                       const RecoverOptions& options) {
  return recover_impl(table, plan, nullptr, options);
}

RecoveryReport recover(const ChoiceTable& table, const RecoveryPlan& plan,
                       const ModelParams& truth, const RecoverOptions& options) {
  return recover_impl(table, plan, &truth, options);
}

ModelParams recover_full_assortment(const ChoiceTable& table, double denom_tolerance) {
  const int n = table.n();
  if (n < 2) throw DomainError("full-assortment recovery needs n >= 2");
  const Assortment full = Assortment::full(n);
  const Eigen::VectorXd& pi_full = table.probs(full);  // outcomes 0..n in order

  ModelParams m;
  m.n = n;
  m.lambda = pi_full;
  m.rho = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.rho(0, 0) = 1.0;

  for (int i = 1; i <= n; ++i) {
    const Assortment sub = full.without(i);
    const Eigen::VectorXd& pi_sub = table.probs(sub);
    const double denom = pi_full[i];
    if (denom <= denom_tolerance) {
      std::ostringstream os;
      os << "pi(" << i << ", full assortment) = " << denom
         << " is too small to divide by";
      throw ZeroDenominator(os.str());
    }
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      double v = (pi_sub[sub.outcome_index(j)] - pi_full[j]) / denom;
      m.rho(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return m;
}

double max_param_error(const ModelParams& a, const ModelParams& b) {
  if (a.n != b.n) throw DomainError("cannot compare models with different n");
  double err = (a.lambda - b.lambda).cwiseAbs().maxCoeff();
  err = std::max(err, (a.rho - b.rho).cwiseAbs().maxCoeff());
  return err;
}

}  // namespace mccm
