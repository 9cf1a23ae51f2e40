#pragma once

#include <optional>
#include <vector>

#include "ovpack/algorithms.hpp"
#include "ovpack/generators.hpp"
#include "ovpack/types.hpp"

namespace ovp::testsupport {

// One item from (id, [(dim, num, den)...], value).
inline Item make_item(ItemId id, Dim dims,
                      std::vector<std::tuple<Dim, long, long>> coords, long value_num = 0,
                      long value_den = 1) {
  std::vector<std::pair<Dim, Rational>> entries;
  for (const auto& [dim, num, den] : coords) entries.emplace_back(dim, Rational(num, den));
  Item item;
  item.id = id;
  item.weights = SparseWeightVector(std::move(entries), dims);
  item.value = Rational(value_num, value_den);
  return item;
}

// Test double: rejects everything; adversaries must stop at length 1.
class AlwaysRejectAlgorithm : public OnlineAlgorithm {
 public:
  void observe(const Item&) override {}
  std::set<ItemId> committed() const override { return {}; }
};

// Test double: pretends to keep everything it ever saw.
class KeepAllAlgorithm : public OnlineAlgorithm {
 public:
  void observe(const Item& item) override { kept_.insert(item.id); }
  std::set<ItemId> committed() const override { return kept_; }

 private:
  std::set<ItemId> kept_;
};

// Test double: keeps only the most recent arrival, silently disposing of
// the previous one.
class KeepLatestAlgorithm : public OnlineAlgorithm {
 public:
  void observe(const Item& item) override { kept_ = {item.id}; }
  std::set<ItemId> committed() const override { return kept_; }

 private:
  std::set<ItemId> kept_;
};

}  // namespace ovp::testsupport
