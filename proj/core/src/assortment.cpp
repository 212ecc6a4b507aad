#include "mccm/assortment.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mccm/errors.hpp"

namespace mccm {

Assortment::Assortment(std::vector<int> products) : products_(std::move(products)) {
  std::sort(products_.begin(), products_.end());
  for (std::size_t k = 0; k < products_.size(); ++k) {
    if (products_[k] < 1)
      throw DomainError("assortment members must be products >= 1, got " +
                        std::to_string(products_[k]));
    if (k > 0 && products_[k] == products_[k - 1])
      throw DomainError("duplicate product " + std::to_string(products_[k]) +
                        " in assortment");
  }
}

Assortment Assortment::full(int n) {
  if (n < 1) throw DomainError("full assortment needs n >= 1");
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  return Assortment(std::move(all));
}

bool Assortment::contains(int product) const {
  return std::binary_search(products_.begin(), products_.end(), product);
}

Assortment Assortment::with(int product) const {
  if (product < 1) throw DomainError("cannot add non-product " + std::to_string(product));
  if (contains(product))
    throw DomainError("product " + std::to_string(product) + " already in " + str());
  std::vector<int> out = products_;
  out.insert(std::upper_bound(out.begin(), out.end(), product), product);
  Assortment s;
  s.products_ = std::move(out);
  return s;
}

Assortment Assortment::without(int product) const {
  if (!contains(product))
    throw DomainError("product " + std::to_string(product) + " not in " + str());
  std::vector<int> out;
  out.reserve(products_.size() - 1);
  for (int p : products_)
    if (p != product) out.push_back(p);
  Assortment s;
  s.products_ = std::move(out);
  return s;
}

std::vector<int> Assortment::outcomes() const {
  std::vector<int> out;
  out.reserve(products_.size() + 1);
  out.push_back(0);
  out.insert(out.end(), products_.begin(), products_.end());
  return out;
}

int Assortment::outcome_index(int outcome) const {
  if (outcome == 0) return 0;
  auto it = std::lower_bound(products_.begin(), products_.end(), outcome);
  if (it == products_.end() || *it != outcome)
    throw DomainError("outcome " + std::to_string(outcome) + " not in " + str() + "+");
  return 1 + static_cast<int>(it - products_.begin());
}

std::string Assortment::str() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < products_.size(); ++k) {
    if (k) os << ',';
    os << products_[k];
  }
  os << '}';
  return os.str();
}

}  // namespace mccm
