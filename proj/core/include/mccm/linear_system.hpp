#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mccm/assortment.hpp"

namespace mccm {

/** Relative singular-value cutoff for numerical rank decisions. */
inline constexpr double kRankTol = 1e-9;

/**
 * A small dense least-squares problem over named unknowns, plus affine
 * equality side conditions. Data rows carry unit weight; a constraint whose
 * coefficient vector touches exactly one unknown pins that unknown and is
 * eliminated before solving, any other constraint is appended as an
 * ordinary row.
 */
struct LinearSystem {
  std::vector<int> columns;  // unknown ids, e.g. states 0..n
  Eigen::MatrixXd coeffs;    // data rows x columns
  Eigen::VectorXd rhs;

  struct Constraint {
    Eigen::VectorXd coeffs;
    double rhs = 0.0;
  };
  std::vector<Constraint> constraints;
};

struct SolveResult {
  Eigen::VectorXd solution;   // aligned with LinearSystem::columns
  double residual = 0.0;      // max |a.x - b| over data rows and constraints
  int rank = 0;               // numerical rank of the solved matrix
  int free_unknowns = 0;      // columns left after pin elimination
};

/**
 * Minimum-norm least squares via a rank-revealing SVD. Numerical rank counts
 * singular values above rank_tolerance times the largest. Throws
 * UnderdeterminedSystem (carrying rank and residual diagnostics) when the
 * rank is below the number of free unknowns.
 */
SolveResult solve_system(const LinearSystem& sys, double rank_tolerance = kRankTol);

}  // namespace mccm
