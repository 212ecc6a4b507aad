#include "mccm/plan.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mccm/errors.hpp"

namespace mccm {
namespace {

void check_plan_args(int n, int r) {
  if (n < 3) throw DomainError("plans need n >= 3, got " + std::to_string(n));
  if (r < 2 || r > n - 1)
    throw DomainError("assortment size r must satisfy 2 <= r <= n-1, got r=" +
                      std::to_string(r));
}

Assortment base_plus(const std::vector<int>& base, int k) {
  std::vector<int> members = base;
  members.push_back(k);
  return Assortment(std::move(members));
}

// All size-r assortments with the given (r-1)-subset as common intersection,
// skipping the excluded product.
std::vector<Assortment> fan_around(const std::vector<int>& base, int n, int excluded) {
  std::vector<Assortment> fan;
  for (int k = 1; k <= n; ++k) {
    if (k == excluded || std::find(base.begin(), base.end(), k) != base.end()) continue;
    fan.push_back(base_plus(base, k));
  }
  return fan;
}

void finish_plan(RecoveryPlan& plan) {
  std::set<Assortment, SizeLexLess> required;
  auto add_with_supersets = [&](const Assortment& s) {
    required.insert(s);
    for (int j = 1; j <= plan.n; ++j)
      if (!s.contains(j)) required.insert(s.with(j));
  };
  for (int i = 1; i <= plan.n; ++i)
    for (const Assortment& s : plan.fans[i]) add_with_supersets(s);
  for (const Assortment& s : plan.lambda_assortments) add_with_supersets(s);
  plan.required_assortments.assign(required.begin(), required.end());
}

}  // namespace

RecoveryPlan build_plan(int n, int r) {
  check_plan_args(n, r);
  RecoveryPlan plan;
  plan.n = n;
  plan.r = r;
  plan.fans.resize(static_cast<std::size_t>(n) + 1);

  if (2 * r <= n) {
    // Two disjoint intersection sets cover all products: {1..r-1} for
    // products outside it, {r..2r-2} for products inside it.
    std::vector<int> primary, secondary;
    for (int p = 1; p <= r - 1; ++p) primary.push_back(p);
    for (int p = r; p <= 2 * r - 2; ++p) secondary.push_back(p);
    for (int i = 1; i <= n; ++i) {
      const bool inside = i <= r - 1;
      plan.fans[i] = fan_around(inside ? secondary : primary, n, i);
    }
  } else {
    // Not enough room for two disjoint intersection sets: each product gets
    // the r-1 smallest other products as its own intersection set.
    for (int i = 1; i <= n; ++i) {
      std::vector<int> base;
      for (int p = 1; static_cast<int>(base.size()) < r - 1; ++p)
        if (p != i) base.push_back(p);
      plan.fans[i] = fan_around(base, n, i);
    }
  }

  // The arrival system reuses product 1's fan plus one assortment that
  // contains product 1; {1..r} is always required by some fan already.
  plan.lambda_assortments = plan.fans[1];
  std::vector<int> first_r;
  for (int p = 1; p <= r; ++p) first_r.push_back(p);
  plan.lambda_assortments.push_back(Assortment(std::move(first_r)));

  finish_plan(plan);
  return plan;
}

RecoveryPlan full_plan(int n, int r) {
  check_plan_args(n, r);
  RecoveryPlan plan;
  plan.n = n;
  plan.r = r;
  plan.fans.resize(static_cast<std::size_t>(n) + 1);
  const std::vector<Assortment> all = assortments_of_size(n, r);
  for (int i = 1; i <= n; ++i)
    for (const Assortment& s : all)
      if (!s.contains(i)) plan.fans[i].push_back(s);
  plan.lambda_assortments = all;
  finish_plan(plan);
  return plan;
}

std::pair<std::size_t, std::size_t> count_required(const RecoveryPlan& plan) {
  std::size_t size_r = 0, size_r1 = 0;
  for (const Assortment& s : plan.required_assortments) {
    if (s.size() == plan.r) ++size_r;
    else if (s.size() == plan.r + 1) ++size_r1;
  }
  return {size_r, size_r1};
}

std::vector<Assortment> assortments_of_size(int n, int r) {
  if (n < 1 || r < 1 || r > n) throw DomainError("assortments_of_size needs 1 <= r <= n");
  std::vector<Assortment> out;
  std::vector<int> members(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) members[static_cast<std::size_t>(k)] = k + 1;
  while (true) {
    out.push_back(Assortment(members));
    int k = r - 1;
    while (k >= 0 && members[static_cast<std::size_t>(k)] == n - (r - 1 - k)) --k;
    if (k < 0) break;
    ++members[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < r; ++t)
      members[static_cast<std::size_t>(t)] = members[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

}  // namespace mccm
