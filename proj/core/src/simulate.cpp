#include "mccm/simulate.hpp"

#include <sstream>
#include <vector>

#include "mccm/errors.hpp"
#include "mccm/recovery.hpp"

namespace mccm {
namespace {

constexpr std::uint64_t kStudyTag = 0x7374756479ULL;  // "study"

int draw_index(const Eigen::VectorXd& weights, double u) {
  double acc = 0.0;
  int last_positive = -1;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  if (last_positive < 0) throw DomainError("cannot sample from an all-zero weight vector");
  return last_positive;  // u landed in rounding slack past the last entry
}

}  // namespace

WalkSample sample_walk(const ModelParams& model, const Assortment& s, SplitMix64& rng,
                       int max_steps) {
  if (s.max_product() > model.n)
    throw DomainError("assortment " + s.str() + " refers past product " +
                      std::to_string(model.n));
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");

  WalkSample out;
  int state = draw_index(model.lambda, rng.next_double());
  out.steps = 1;
  while (state != 0 && !s.contains(state)) {
    if (out.steps >= max_steps) {
      std::ostringstream os;
      os << "walk for " << s.str() << " did not reach an outcome within " << max_steps
         << " steps";
      throw WalkLimitExceeded(os.str());
    }
    state = draw_index(model.rho.row(state), rng.next_double());
    ++out.steps;
  }
  out.outcome = state;
  return out;
}

int sample_purchase(const ModelParams& model, const Assortment& s, SplitMix64& rng,
                    int max_steps) {
  return sample_walk(model, s, rng, max_steps).outcome;
}

ChoiceTable estimate_table(const ModelParams& model, const std::vector<Assortment>& assortments,
                           const SampleConfig& config) {
  if (config.samples_per_assortment < 1)
    throw DomainError("samples_per_assortment must be at least 1");
  if (config.laplace_alpha < 0.0) throw DomainError("laplace_alpha must be nonnegative");

  ChoiceTable table(model.n);
  for (const Assortment& s : assortments) {
    if (table.contains(s)) continue;
    const std::uint64_t s_hash = assortment_hash(s);
    const std::vector<int> outcomes = s.outcomes();
    std::vector<long long> counts(outcomes.size(), 0);
    for (long long k = 0; k < config.samples_per_assortment; ++k) {
      SplitMix64 rng(derive_stream(config.seed, {s_hash, static_cast<std::uint64_t>(k)}));
      int outcome = sample_purchase(model, s, rng, config.max_steps);
      ++counts[static_cast<std::size_t>(s.outcome_index(outcome))];
    }
    const double denom = static_cast<double>(config.samples_per_assortment) +
                         config.laplace_alpha * static_cast<double>(outcomes.size());
    Eigen::VectorXd probs(static_cast<Eigen::Index>(outcomes.size()));
    for (std::size_t idx = 0; idx < outcomes.size(); ++idx)
      probs[static_cast<Eigen::Index>(idx)] =
          (static_cast<double>(counts[idx]) + config.laplace_alpha) / denom;
    table.set(s, probs);
  }
  return table;
}

std::vector<StudyPoint> error_vs_samples(const ModelParams& model, const RecoveryPlan& plan,
                                         const std::vector<long long>& m_values,
                                         std::uint64_t seed) {
  std::vector<StudyPoint> points;
  points.reserve(m_values.size());
  for (long long m : m_values) {
    StudyPoint point;
    point.m = m;
    try {
      SampleConfig config;
      config.samples_per_assortment = m;
      config.seed = derive_stream(seed, {kStudyTag, static_cast<std::uint64_t>(m)});
      ChoiceTable table = estimate_table(model, plan.required_assortments, config);
      RecoverOptions options;
      options.denom_tolerance = kEstimatedDenomTol;
      RecoveryReport report = recover(table, plan, model, options);
      point.max_error = report.max_param_error;
    } catch (const Error& e) {
      point.failure = e.what();
    }
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace mccm
