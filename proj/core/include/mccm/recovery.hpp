#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mccm/choice_oracle.hpp"
#include "mccm/linear_system.hpp"
#include "mccm/model.hpp"
#include "mccm/plan.hpp"
#include "mccm/tables.hpp"

namespace mccm {

/** Entries below this trigger the clip-and-renormalize projection. */
inline constexpr double kProjectionTrigger = -1e-9;

struct RecoverOptions {
  double rank_tolerance = kRankTol;
  double denom_tolerance = kExactDenomTol;  // pass kEstimatedDenomTol for Monte Carlo tables
  bool fail_fast = true;  // false: record per-system errors and keep going
};

/**
 * Everything recover() learned. `per_system_*` maps are keyed "1".."n" for
 * the transition-row systems and "lambda" for the arrival system.
 * `projected` names the parameter vectors that needed the negative-entry
 * projection; `validation` holds the findings for the recovered model
 * (reducibility is reported here, never enforced). `max_param_error` is
 * filled only when a ground-truth model was supplied.
 */
struct RecoveryReport {
  ModelParams recovered;
  std::map<std::string, double> per_system_residual;
  std::map<std::string, int> per_system_rank;
  double rank_threshold = kRankTol;
  std::optional<double> max_param_error;
  std::vector<std::string> projected;
  std::map<std::string, std::string> per_system_errors;
  std::vector<Violation> validation;
};

/**
 * Linear system determining transition row i: one row per (S, j) with S in
 * the fan (S must exclude i) and j in S_+, with coefficients given by the
 * conditional probabilities of j under each possible origin and right-hand
 * side the conditional under origin i. Side conditions pin entry i to zero
 * and make the row sum to one.
 */
LinearSystem build_rho_system(const ConditionalTable& cond, int product,
                              const std::vector<Assortment>& fan);

/** Linear system determining lambda; right-hand sides are plain choice probabilities. */
LinearSystem build_lambda_system(const ConditionalTable& cond, const ChoiceTable& table,
                                 const std::vector<Assortment>& assortments);

/** Small-assortment parameter recovery from a choice table covering the plan. */
RecoveryReport recover(const ChoiceTable& table, const RecoveryPlan& plan,
                       const RecoverOptions& options = {});

/** Same, with a ground-truth model for error reporting. */
RecoveryReport recover(const ChoiceTable& table, const RecoveryPlan& plan,
                       const ModelParams& truth, const RecoverOptions& options = {});

/**
 * Closed-form recovery from the full assortment and its n one-product
 * deletions: lambda_j = pi(j, N) and
 * rho_ij = (pi(j, N \ {i}) - pi(j, N)) / pi(i, N).
 */
ModelParams recover_full_assortment(const ChoiceTable& table,
                                    double denom_tolerance = kExactDenomTol);

/** Max absolute entrywise difference across lambda and rho. */
double max_param_error(const ModelParams& a, const ModelParams& b);

}  // namespace mccm
