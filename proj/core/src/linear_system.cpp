#include "mccm/linear_system.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "mccm/errors.hpp"

namespace mccm {

SolveResult solve_system(const LinearSystem& sys, double rank_tolerance) {
  const Eigen::Index cols = static_cast<Eigen::Index>(sys.columns.size());
  if (sys.coeffs.rows() > 0 && sys.coeffs.cols() != cols)
    throw DomainError("coefficient matrix width does not match unknown count");
  if (sys.rhs.size() != sys.coeffs.rows())
    throw DomainError("rhs length does not match row count");

  // Split constraints into single-unknown pins (eliminated) and general rows.
  std::map<Eigen::Index, double> pinned;
  std::vector<const LinearSystem::Constraint*> general;
  for (const auto& c : sys.constraints) {
    if (c.coeffs.size() != cols)
      throw DomainError("constraint width does not match unknown count");
    Eigen::Index nonzero = -1;
    int count = 0;
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (c.coeffs[k] != 0.0) {
        nonzero = k;
        ++count;
        if (count > 1) break;
      }
    }
    if (count == 1) {
      double value = c.rhs / c.coeffs[nonzero];
      auto [it, inserted] = pinned.emplace(nonzero, value);
      if (!inserted && std::abs(it->second - value) > 1e-12)
        throw DomainError("conflicting pin constraints on one unknown");
    } else {
      general.push_back(&c);
    }
  }

  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index k = 0; k < cols; ++k)
    if (!pinned.count(k)) free_cols.push_back(k);
  const Eigen::Index free = static_cast<Eigen::Index>(free_cols.size());
  const Eigen::Index rows = sys.coeffs.rows() + static_cast<Eigen::Index>(general.size());

  auto fail = [&](int rank, double residual) {
    std::ostringstream os;
    os << "system is underdetermined: rank " << rank << " < " << free
       << " free unknowns (" << rows << " rows, residual " << residual << ")";
    throw UnderdeterminedSystem(os.str());
  };
  if (rows == 0) fail(0, 0.0);

  Eigen::MatrixXd a(rows, free);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < sys.coeffs.rows(); ++r) {
    double shift = 0.0;
    for (const auto& [k, v] : pinned) shift += sys.coeffs(r, k) * v;
    b[r] = sys.rhs[r] - shift;
    for (Eigen::Index c = 0; c < free; ++c) a(r, c) = sys.coeffs(r, free_cols[c]);
  }
  for (std::size_t g = 0; g < general.size(); ++g) {
    const auto& con = *general[g];
    Eigen::Index r = sys.coeffs.rows() + static_cast<Eigen::Index>(g);
    double shift = 0.0;
    for (const auto& [k, v] : pinned) shift += con.coeffs[k] * v;
    b[r] = con.rhs - shift;
    for (Eigen::Index c = 0; c < free; ++c) a(r, c) = con.coeffs[free_cols[c]];
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_tolerance);
  const int rank = static_cast<int>(svd.rank());
  Eigen::VectorXd reduced = svd.solve(b);
  const double residual =
      rows == 0 ? 0.0 : (a * reduced - b).cwiseAbs().maxCoeff();
  if (rank < free) fail(rank, residual);

  SolveResult out;
  out.solution = Eigen::VectorXd::Zero(cols);
  for (const auto& [k, v] : pinned) out.solution[k] = v;
  for (Eigen::Index c = 0; c < free; ++c) out.solution[free_cols[c]] = reduced[c];
  out.residual = residual;
  out.rank = rank;
  out.free_unknowns = static_cast<int>(free);
  return out;
}

}  // namespace mccm
