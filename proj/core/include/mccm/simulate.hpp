#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mccm/assortment.hpp"
#include "mccm/model.hpp"
#include "mccm/plan.hpp"
#include "mccm/rng.hpp"
#include "mccm/tables.hpp"

namespace mccm {

/** Default cap on simulated walk length before WalkLimitExceeded. */
inline constexpr int kDefaultMaxSteps = 10000;

struct SampleConfig {
  long long samples_per_assortment = 0;  // m >= 1
  std::uint64_t seed = 0;
  int max_steps = kDefaultMaxSteps;  // must be >= n when used
  double laplace_alpha = 0.0;        // optional smoothing added to each outcome count
};

/**
 * One purchase outcome: the walk starts at a lambda draw and follows rho
 * until it enters S_+ = {0} ∪ S. Draws consume `rng` sequentially, so a
 * reused generator continues its stream deterministically.
 */
int sample_purchase(const ModelParams& model, const Assortment& s, SplitMix64& rng,
                    int max_steps = kDefaultMaxSteps);

struct WalkSample {
  int outcome = 0;
  int steps = 0;  // states visited, including the arrival state
};

/** Like sample_purchase but also reports the walk length. */
WalkSample sample_walk(const ModelParams& model, const Assortment& s, SplitMix64& rng,
                       int max_steps = kDefaultMaxSteps);

/**
 * Empirical choice table: m walks per assortment. Each sample runs on its
 * own stream keyed by (seed, assortment, sample index), so the result is
 * bit-identical no matter how assortments are ordered or scheduled. With
 * laplace_alpha = a > 0, probabilities are (count + a) / (m + a |S_+|).
 */
ChoiceTable estimate_table(const ModelParams& model,
                           const std::vector<Assortment>& assortments,
                           const SampleConfig& config);

struct StudyPoint {
  long long m = 0;
  std::optional<double> max_error;  // empty when recovery failed
  std::string failure;              // reason, when max_error is empty
};

/**
 * Recovery error as a function of sample size: for each m, estimate the
 * plan's required tables (fresh substream per m), run recovery with the
 * Monte Carlo denominator guard, and compare to the generating model.
 * Failed recoveries become failure rows rather than exceptions.
 */
std::vector<StudyPoint> error_vs_samples(const ModelParams& model,
                                         const RecoveryPlan& plan,
                                         const std::vector<long long>& m_values,
                                         std::uint64_t seed);

}  // namespace mccm
