#pragma once

#include <compare>
#include <string>
#include <vector>

namespace mccm {

/**
 * An offered set of products, stored sorted and duplicate-free.
 *
 * Products are numbered 1..n; outcome 0 is the no-purchase option and is
 * never a member. The outcome space of an assortment S is S_+ = {0} ∪ S,
 * indexed canonically as 0 first, then the products in ascending order.
 * Membership of products in 1..n is checked wherever a model or table
 * provides the horizon n; the constructor only rejects values < 1 and
 * duplicates.
 */
class Assortment {
 public:
  Assortment() = default;
  explicit Assortment(std::vector<int> products);

  /** The full assortment {1, ..., n}. */
  static Assortment full(int n);

  const std::vector<int>& products() const { return products_; }
  int size() const { return static_cast<int>(products_.size()); }
  bool empty() const { return products_.empty(); }
  bool contains(int product) const;
  int max_product() const { return products_.empty() ? 0 : products_.back(); }

  /** Copy with one product added; adding an existing member is an error. */
  Assortment with(int product) const;
  /** Copy with one product removed; removing a non-member is an error. */
  Assortment without(int product) const;

  /** Outcomes in canonical order: 0, then members ascending. */
  std::vector<int> outcomes() const;
  /** Position of an outcome (0 or a member) in the canonical order. */
  int outcome_index(int outcome) const;

  /** Compact text form, e.g. "{1,3,7}"; used in messages and keys. */
  std::string str() const;

  auto operator<=>(const Assortment&) const = default;

 private:
  std::vector<int> products_;
};

/** Orders assortments by (size, lexicographic members), the file order. */
struct SizeLexLess {
  bool operator()(const Assortment& a, const Assortment& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.products() < b.products();
  }
};

}  // namespace mccm
