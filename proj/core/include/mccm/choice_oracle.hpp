#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mccm/assortment.hpp"
#include "mccm/model.hpp"
#include "mccm/tables.hpp"

namespace mccm {

/** Denominator guard when conditionals come from exact tables. */
inline constexpr double kExactDenomTol = 1e-12;
/** Looser guard suited to Monte Carlo estimated tables. */
inline constexpr double kEstimatedDenomTol = 1e-6;

/**
 * Absorption probabilities when S is offered: a (n+1) x (|S|+1) matrix P
 * with P(i, idx(j)) the probability the walk started at state i absorbs at
 * outcome j in S_+ (columns in canonical outcome order). Rows with i in S_+
 * are exact indicator rows; transient rows come from the dense solve
 * (I - Q) X = R over the products outside S.
 */
Eigen::MatrixXd absorption_probabilities(const ModelParams& model, const Assortment& s);

/** Choice probabilities pi(., S) = lambda' P, over S_+ in canonical order. */
Eigen::VectorXd exact_choice_probs(const ModelParams& model, const Assortment& s);

/** Exact table for a list of assortments (duplicates collapse). */
ChoiceTable exact_choice_table(const ModelParams& model,
                               const std::vector<Assortment>& assortments);

/**
 * Conditional choice probability computed straight from the model: the
 * probability `outcome` is reached before the rest of S_+ starting at
 * `origin`. Equals 1 when origin == outcome and 0 for any other origin
 * inside S_+.
 */
double conditional_direct(const ModelParams& model, const Assortment& s,
                          int origin, int outcome);

/**
 * The same conditional probability reconstructed from choice probabilities
 * alone: for origin i outside S it is
 *
 *   (pi(j, S) - pi(j, S ∪ {i})) / pi(i, S ∪ {i}),
 *
 * clamped into [0,1]. Needs table entries for S and S ∪ {i}; throws
 * ZeroDenominator when the divisor is at or below denom_tolerance.
 */
double conditional_from_tables(const ChoiceTable& table, const Assortment& s,
                               int origin, int outcome,
                               double denom_tolerance = kExactDenomTol);

/**
 * Builds the conditional matrix for every listed assortment and every origin
 * in 0..n. Failures are aggregated: the error lists every offending
 * (assortment, origin) pair, split into missing-assortment and
 * zero-denominator causes.
 */
ConditionalTable build_conditional_table(const ChoiceTable& table,
                                         const std::vector<Assortment>& assortments,
                                         double denom_tolerance = kExactDenomTol);

/**
 * Lenient variant: rows that cannot be computed because of a ~0 denominator
 * become NaN holes (reading one later throws ZeroDenominator) and the reason
 * is appended to *failures. Missing assortments still fail the whole build.
 */
ConditionalTable build_conditional_table_lenient(const ChoiceTable& table,
                                                 const std::vector<Assortment>& assortments,
                                                 double denom_tolerance,
                                                 std::vector<std::string>* failures);

}  // namespace mccm
