#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mccm {

/** Tolerance for probability-vector sums and entry nonnegativity. */
inline constexpr double kStochasticTol = 1e-12;
/** Entries at or below this magnitude count as structural zeros. */
inline constexpr double kStructuralZeroTol = 1e-15;

/**
 * Parameters of a Markov chain choice model over states 0..n.
 *
 * State 0 is the absorbing no-purchase option; states 1..n are products.
 * `lambda` is the arrival distribution over all n+1 states and `rho` the
 * row-stochastic transition matrix. A well-formed model has rho(0,0) = 1,
 * zero diagonal on product rows, and a product-to-product block whose
 * positive-entry digraph is strongly connected (so a walk over any offered
 * set eventually absorbs).
 */
struct ModelParams {
  int n = 0;
  Eigen::VectorXd lambda;  // length n+1
  Eigen::MatrixXd rho;     // (n+1) x (n+1)
};

enum class ViolationCode {
  BadShape,
  BadLambda,
  NonStochasticRow,
  SelfLoop,
  NoPurchaseNotAbsorbing,
  ReducibleSubmatrix,
};

const char* to_string(ViolationCode code);

/** One validation finding: a machine-readable code plus human detail. */
struct Violation {
  ViolationCode code;
  std::string detail;
};

/**
 * Checks every model invariant and returns all findings (empty = valid).
 * Never throws; malformed shapes are reported as BadShape.
 */
std::vector<Violation> validate(const ModelParams& model);

bool is_valid(const ModelParams& model);

/**
 * Deterministic random instance: product transition rows are normalized
 * exponential draws scaled to leave `no_purchase_mass` on column 0, and
 * lambda is strictly positive on products with lambda_0 = 0. Identical
 * (n, no_purchase_mass, seed) triples give bit-identical models.
 *
 * Requires n >= 3 and 0 <= no_purchase_mass < 1.
 */
ModelParams generate_random(int n, double no_purchase_mass, std::uint64_t seed);

}  // namespace mccm
