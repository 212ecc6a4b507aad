#include "mccm/model.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "mccm/errors.hpp"
#include "mccm/rng.hpp"

namespace mccm {
namespace {

constexpr std::uint64_t kLambdaTag = 0x6C616D626461ull;  // "lambda"
constexpr std::uint64_t kRhoRowTag = 0x72686Full;        // "rho"

bool finite_all(const Eigen::Ref<const Eigen::VectorXd>& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (!std::isfinite(v[k])) return false;
  return true;
}

std::string row_detail(const char* what, int i, double sum) {
  std::ostringstream os;
  os << what << " at row " << i << " (sum " << sum << ")";
  return os.str();
}

// Strong connectivity of the product-to-product positive-entry digraph:
// every product reachable from product 1 and product 1 reachable from every
// product. Adjacency uses the structural-zero cutoff.
bool product_block_strongly_connected(const Eigen::MatrixXd& rho, int n) {
  if (n <= 1) return true;
  auto reach = [&](bool reversed) {
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 1; v <= n; ++v) {
        if (seen[v]) continue;
        double edge = reversed ? rho(v, u) : rho(u, v);
        if (edge > kStructuralZeroTol) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach(false) && reach(true);
}

}  // namespace

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::BadShape: return "BadShape";
    case ViolationCode::BadLambda: return "BadLambda";
    case ViolationCode::NonStochasticRow: return "NonStochasticRow";
    case ViolationCode::SelfLoop: return "SelfLoop";
    case ViolationCode::NoPurchaseNotAbsorbing: return "NoPurchaseNotAbsorbing";
    case ViolationCode::ReducibleSubmatrix: return "ReducibleSubmatrix";
  }
  return "Unknown";
}

std::vector<Violation> validate(const ModelParams& model) {
  std::vector<Violation> out;
  const int n = model.n;
  if (n < 1 || model.lambda.size() != n + 1 || model.rho.rows() != n + 1 ||
      model.rho.cols() != n + 1) {
    std::ostringstream os;
    os << "expected lambda length n+1 and rho (n+1)x(n+1) with n >= 1; got n=" << n
       << ", lambda " << model.lambda.size() << ", rho " << model.rho.rows() << "x"
       << model.rho.cols();
    out.push_back({ViolationCode::BadShape, os.str()});
    return out;
  }

  if (!finite_all(model.lambda) || model.lambda.minCoeff() < -kStochasticTol ||
      std::abs(model.lambda.sum() - 1.0) > kStochasticTol) {
    out.push_back({ViolationCode::BadLambda,
                   row_detail("arrival distribution not a probability vector", -1,
                              model.lambda.sum())});
  }

  for (int i = 0; i <= n; ++i) {
    Eigen::VectorXd row = model.rho.row(i);
    if (!finite_all(row) || row.minCoeff() < -kStochasticTol ||
        std::abs(row.sum() - 1.0) > kStochasticTol) {
      out.push_back({ViolationCode::NonStochasticRow,
                     row_detail("transition row not a probability vector", i, row.sum())});
    }
  }

  if (std::abs(model.rho(0, 0) - 1.0) > kStochasticTol ||
      model.rho.row(0).tail(n).maxCoeff() > kStructuralZeroTol) {
    out.push_back({ViolationCode::NoPurchaseNotAbsorbing,
                   "row 0 must be the point mass on state 0"});
  }

  for (int i = 1; i <= n; ++i) {
    if (model.rho(i, i) > kStructuralZeroTol) {
      out.push_back({ViolationCode::SelfLoop,
                     "product " + std::to_string(i) + " transitions to itself"});
    }
  }

  if (!product_block_strongly_connected(model.rho, n)) {
    out.push_back({ViolationCode::ReducibleSubmatrix,
                   "product-to-product block is not irreducible"});
  }
  return out;
}

bool is_valid(const ModelParams& model) { return validate(model).empty(); }

ModelParams generate_random(int n, double no_purchase_mass, std::uint64_t seed) {
  if (n < 3) throw DomainError("generate_random needs n >= 3, got " + std::to_string(n));
  if (!(no_purchase_mass >= 0.0) || !(no_purchase_mass < 1.0))
    throw DomainError("no_purchase_mass must lie in [0, 1)");

  ModelParams m;
  m.n = n;
  m.lambda = Eigen::VectorXd::Zero(n + 1);
  m.rho = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.rho(0, 0) = 1.0;

  SplitMix64 lam_rng(derive_stream(seed, {kLambdaTag}));
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    m.lambda[j] = -std::log(lam_rng.next_double_open());
    total += m.lambda[j];
  }
  m.lambda.tail(n) /= total;

  for (int i = 1; i <= n; ++i) {
    SplitMix64 row_rng(derive_stream(seed, {kRhoRowTag, static_cast<std::uint64_t>(i)}));
    double row_total = 0.0;
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      m.rho(i, j) = -std::log(row_rng.next_double_open());
      row_total += m.rho(i, j);
    }
    for (int j = 1; j <= n; ++j)
      if (j != i) m.rho(i, j) *= (1.0 - no_purchase_mass) / row_total;
    m.rho(i, 0) = no_purchase_mass;
  }
  return m;
}

}  // namespace mccm
