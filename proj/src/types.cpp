#include "ovpack/types.hpp"

#include <algorithm>
#include <map>

#include "ovpack/errors.hpp"

namespace ovp {

SparseWeightVector::SparseWeightVector(std::vector<std::pair<Dim, Rational>> entries,
                                       Dim dim_count)
    : entries_(std::move(entries)), dim_count_(dim_count) {
  const Rational one(1);
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& [dim, w] = entries_[i];
    if (dim >= dim_count_) throw ParamError("weight entry dimension out of range");
    if (i > 0 && entries_[i - 1].first >= dim) {
      throw ParamError("weight entries must have strictly increasing dimensions");
    }
    if (w.sign() <= 0 || w > one) throw ParamError("weights must lie in (0, 1]");
  }
}

Rational SparseWeightVector::weight(Dim dim) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const auto& e, Dim d) { return e.first < d; });
  if (it != entries_.end() && it->first == dim) return it->second;
  return Rational();
}

bool SparseWeightVector::has(Dim dim) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                             [](const auto& e, Dim d) { return e.first < d; });
  return it != entries_.end() && it->first == dim;
}

Rational SparseWeightVector::max_weight() const {
  Rational m;
  for (const auto& [dim, w] : entries_) m = max(m, w);
  return m;
}

bool SparseWeightVector::lex_less(const SparseWeightVector& a, const SparseWeightVector& b) {
  auto ia = a.entries_.begin();
  auto ib = b.entries_.begin();
  while (ia != a.entries_.end() || ib != b.entries_.end()) {
    // Next dimension where either vector is non-zero.
    if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
      return false;  // a positive vs b zero at ia->first
    }
    if (ia == a.entries_.end() || ib->first < ia->first) {
      return true;  // a zero vs b positive at ib->first
    }
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return false;
}

ExtendedRational density(const Item& item, const Rational& value, Dim dim) {
  if (value.sign() < 0) throw ParamError("density: negative value");
  if (dim >= item.weights.dim_count()) throw ParamError("density: dimension out of range");
  const Rational w = item.weights.weight(dim);
  if (w.is_zero()) return ExtendedRational::infinity();
  return ExtendedRational::finite(value / w);
}

bool is_feasible(std::span<const Item* const> items, Dim dim_count) {
  std::map<Dim, Rational> load;
  const Rational one(1);
  for (const Item* item : items) {
    if (item->weights.dim_count() != dim_count) {
      throw ParamError("is_feasible: mismatched dimension count");
    }
    for (const auto& [dim, w] : item->weights.entries()) {
      Rational& l = load[dim];
      l += w;
      if (l > one) return false;
    }
  }
  return true;
}

bool is_feasible(const std::vector<Item>& items, Dim dim_count) {
  std::vector<const Item*> ptrs;
  ptrs.reserve(items.size());
  for (const auto& it : items) ptrs.push_back(&it);
  return is_feasible(std::span<const Item* const>(ptrs), dim_count);
}

}  // namespace ovp
