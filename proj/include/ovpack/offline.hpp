#pragma once

#include <set>
#include <vector>

#include "ovpack/objective.hpp"
#include "ovpack/rational.hpp"
#include "ovpack/types.hpp"

namespace ovp {

struct OptResult {
  std::set<ItemId> best_set;
  Rational best_value;
  uint64_t explored = 0;  // subsets examined
};

// Exact offline optimum by depth-first branch and bound: a branch dies as
// soon as a dimension's partial load exceeds capacity, or when even taking
// everything that remains cannot beat the incumbent. Deterministic: items
// are scanned in id order, take-branch first, strict improvements only.
// Refuses more than 30 items rather than run forever.
OptResult brute_force_opt(const std::vector<Item>& items, const Objective& objective);

// True iff the claimed set is feasible and evaluates to the claimed value.
// Cheap certificate check for analytically-known optima.
bool verify_claimed_opt(const std::vector<Item>& items, const Objective& objective,
                        const std::set<ItemId>& claimed_set, const Rational& claimed_value);

}  // namespace ovp
