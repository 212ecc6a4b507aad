#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mccm/assortment.hpp"

namespace mccm {

/**
 * The data-collection schedule for small-assortment recovery at size r.
 *
 * For each product i, `fans[i]` is a family of n-r size-r assortments that
 * exclude i and pairwise share one fixed (r-1)-subset; the rows they induce
 * accumulate enough rank to pin down transition row i. `lambda_assortments`
 * feed the arrival-distribution system. `required_assortments` is the
 * deduplicated set of all assortments whose choice probabilities must be
 * supplied: every planned size-r set S plus every S ∪ {j}, which the
 * conditional-probability reconstruction consumes. Members have size r or
 * r+1 only.
 */
struct RecoveryPlan {
  int n = 0;
  int r = 0;
  std::vector<std::vector<Assortment>> fans;  // index 0 unused
  std::vector<Assortment> lambda_assortments;
  std::vector<Assortment> required_assortments;  // (size, lex) order
};

/**
 * Builds the O(n^2) schedule. With r <= n/2 two disjoint intersection sets
 * serve all products ({1..r-1} for products outside it, {r..2r-2} for
 * products inside); otherwise each product i gets the r-1 smallest products
 * other than i as its intersection set. Requires n >= 3 and 2 <= r <= n-1.
 */
RecoveryPlan build_plan(int n, int r);

/**
 * The exhaustive alternative: every size-r assortment avoiding i forms
 * product i's fan, and all size-r assortments feed the lambda system.
 * Requirement counts grow binomially; intended for small n.
 */
RecoveryPlan full_plan(int n, int r);

/** (number of size-r, number of size-(r+1)) required assortments. */
std::pair<std::size_t, std::size_t> count_required(const RecoveryPlan& plan);

/** All size-r subsets of {1..n} in lexicographic order. */
std::vector<Assortment> assortments_of_size(int n, int r);

}  // namespace mccm
