#pragma once

#include <map>
#include <set>

#include "ovpack/rational.hpp"
#include "ovpack/types.hpp"

namespace ovp {

// The online algorithm's full mutable state between arrivals.
//
// held          — the fractional solution; support is the committed set S.
// ever_accepted — the peak fraction each item ever reached; support is A,
//                 the set of items accepted at least once. Never decreased.
// load          — per-dimension fractional consumption sum(held * weight),
//                 kept only for dimensions ever touched.
//
// Between arrivals: every held fraction is either 0 or at least the
// capacity margin; every ever_accepted fraction is either 0 or at least
// the commit threshold; load never exceeds the capacity margin.
struct FractionalState {
  explicit FractionalState(Dim dims, Rational empty_value = Rational())
      : dim_count(dims), f_empty(std::move(empty_value)) {}

  Dim dim_count;
  Rational f_empty;

  std::map<ItemId, Rational> held;
  std::map<ItemId, Rational> ever_accepted;
  std::map<Dim, Rational> load;

  // Frozen marginal value of every item at its arrival, kept also for
  // discarded items (reports need them; the engine only reads A's).
  std::map<ItemId, Rational> value_at_arrival;

  // Every item ever observed, for weight lookups and duplicate detection.
  std::map<ItemId, Item> items;

  // Max non-zero coordinate count over all arrivals; the engine never
  // needs it but bound checks do.
  size_t observed_sparsity = 0;

  std::set<ItemId> kept_set() const {
    std::set<ItemId> s;
    for (const auto& [id, frac] : held) {
      if (frac.sign() > 0) s.insert(id);
    }
    return s;
  }

  std::set<ItemId> ever_set() const {
    std::set<ItemId> a;
    for (const auto& [id, frac] : ever_accepted) {
      if (frac.sign() > 0) a.insert(id);
    }
    return a;
  }

  void recompute_loads() {
    load.clear();
    for (const auto& [id, frac] : held) {
      if (frac.sign() <= 0) continue;
      const Item& item = items.at(id);
      for (const auto& [dim, w] : item.weights.entries()) {
        load[dim] += frac * w;
      }
    }
  }
};

}  // namespace ovp
