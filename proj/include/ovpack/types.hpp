#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ovpack/rational.hpp"

namespace ovp {

using ItemId = uint32_t;
using Dim = uint32_t;
using ElementId = uint32_t;

// Weight vector in [0,1]^d stored as sorted (dimension, weight) pairs;
// only the non-zero coordinates are materialized since d can be huge
// while the sparsity stays small.
class SparseWeightVector {
 public:
  SparseWeightVector() : dim_count_(0) {}
  // Entries must have strictly increasing dimensions < dim_count and
  // weights in (0, 1].
  SparseWeightVector(std::vector<std::pair<Dim, Rational>> entries, Dim dim_count);

  const std::vector<std::pair<Dim, Rational>>& entries() const { return entries_; }
  Dim dim_count() const { return dim_count_; }
  size_t sparsity() const { return entries_.size(); }

  // Weight on a dimension; zero when the coordinate is absent.
  Rational weight(Dim dim) const;
  bool has(Dim dim) const;

  Rational max_weight() const;

  // Dense lexicographic order (absent coordinates compare as zero).
  static bool lex_less(const SparseWeightVector& a, const SparseWeightVector& b);

 private:
  std::vector<std::pair<Dim, Rational>> entries_;
  Dim dim_count_;
};

// One arriving element: arrival index (also the consistent tie-break
// order), weight vector, and the objective payload carried by the
// instance file (modular value or covered elements).
struct Item {
  ItemId id = 0;
  SparseWeightVector weights;
  Rational value;                   // modular objectives
  std::vector<ElementId> covers;    // coverage objectives
};

// Value-per-unit-weight of an item on one dimension; +infinity when the
// item does not use the dimension.
ExtendedRational density(const Item& item, const Rational& value, Dim dim);

// Exact feasibility: per-dimension total weight at most 1.
bool is_feasible(std::span<const Item* const> items, Dim dim_count);
bool is_feasible(const std::vector<Item>& items, Dim dim_count);

}  // namespace ovp
