#pragma once

#include <map>
#include <set>
#include <vector>

#include "ovpack/rational.hpp"
#include "ovpack/types.hpp"

namespace ovp {

// Monotone submodular utility oracle. The engine only ever queries it
// through marginal values; whole-set evaluation exists for the offline
// solver and for reports. Three shipped families:
//   cardinality  f(S) = |S|
//   modular      f(S) = sum of per-item values
//   coverage     f(S) = total weight of the union of covered elements
class Objective {
 public:
  enum class Kind { kCardinality, kModular, kCoverage };

  static Objective cardinality();
  static Objective modular(std::map<ItemId, Rational> values);
  static Objective coverage(std::map<ItemId, std::vector<ElementId>> covers,
                            std::map<ElementId, Rational> element_weights);

  Kind kind() const { return kind_; }

  // Adopts the payload of an item revealed online (adaptive adversaries
  // produce items one by one); no-op when the id is already known.
  void register_item(const Item& item);

  // f(base + u) - f(base); requires u not already in base.
  Rational marginal(const std::set<ItemId>& base, ItemId u) const;

  Rational evaluate(const std::set<ItemId>& ids) const;

  Rational f_empty() const { return Rational(); }

  // Per-id payload accessors for serialization.
  const std::map<ItemId, Rational>& modular_values() const { return values_; }
  const std::map<ItemId, std::vector<ElementId>>& cover_sets() const { return covers_; }
  const std::map<ElementId, Rational>& element_weights() const { return element_weights_; }

 private:
  explicit Objective(Kind kind) : kind_(kind) {}

  const Rational& value_of(ItemId u) const;
  const std::vector<ElementId>& covers_of(ItemId u) const;

  Kind kind_;
  std::map<ItemId, Rational> values_;
  std::map<ItemId, std::vector<ElementId>> covers_;
  std::map<ElementId, Rational> element_weights_;
};

// Builds the matching objective for a parsed instance: modular values or
// cover sets are picked up from the item payloads.
Objective objective_from_items(Objective::Kind kind, const std::vector<Item>& items,
                               std::map<ElementId, Rational> element_weights = {});

}  // namespace ovp
