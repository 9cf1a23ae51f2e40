#include "ovpack/offline.hpp"

#include <algorithm>
#include <map>

#include "ovpack/errors.hpp"

namespace ovp {
namespace {

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Item>& items, const Objective& objective)
      : items_(items), objective_(objective) {
    // Monotone completion bounds per suffix: the exact value of taking
    // everything from a given depth on, merged into the current prefix.
    suffix_value_.assign(items_.size() + 1, Rational());
    if (objective_.kind() == Objective::Kind::kCoverage) {
      suffix_elements_.assign(items_.size() + 1, {});
      for (size_t i = items_.size(); i-- > 0;) {
        std::set<ElementId> acc = suffix_elements_[i + 1];
        for (ElementId e : objective_.cover_sets().at(items_[i].id)) acc.insert(e);
        suffix_elements_[i] = std::move(acc);
      }
    } else {
      for (size_t i = items_.size(); i-- > 0;) {
        const Rational v = objective_.kind() == Objective::Kind::kCardinality
                               ? Rational(1)
                               : objective_.modular_values().at(items_[i].id);
        suffix_value_[i] = suffix_value_[i + 1] + v;
      }
    }
  }

  OptResult solve() {
    result_.best_value = objective_.f_empty();
    dfs(0);
    return std::move(result_);
  }

 private:
  Rational element_weight(ElementId e) const {
    auto it = objective_.element_weights().find(e);
    return it == objective_.element_weights().end() ? Rational(1) : it->second;
  }

  // Exact value of current ∪ {everything from depth on}.
  Rational completion_value(size_t depth) const {
    if (objective_.kind() == Objective::Kind::kCoverage) {
      Rational total = current_value_;
      for (ElementId e : suffix_elements_[depth]) {
        auto it = covered_.find(e);
        if (it == covered_.end() || it->second == 0) total += element_weight(e);
      }
      return total;
    }
    return current_value_ + suffix_value_[depth];
  }

  void take(const Item& item) {
    for (const auto& [dim, w] : item.weights.entries()) load_[dim] += w;
    if (objective_.kind() == Objective::Kind::kCoverage) {
      for (ElementId e : objective_.cover_sets().at(item.id)) {
        if (covered_[e]++ == 0) current_value_ += element_weight(e);
      }
    } else if (objective_.kind() == Objective::Kind::kCardinality) {
      current_value_ += Rational(1);
    } else {
      current_value_ += objective_.modular_values().at(item.id);
    }
    current_.push_back(item.id);
  }

  void untake(const Item& item) {
    current_.pop_back();
    for (const auto& [dim, w] : item.weights.entries()) load_[dim] -= w;
    if (objective_.kind() == Objective::Kind::kCoverage) {
      for (ElementId e : objective_.cover_sets().at(item.id)) {
        if (--covered_[e] == 0) current_value_ -= element_weight(e);
      }
    } else if (objective_.kind() == Objective::Kind::kCardinality) {
      current_value_ -= Rational(1);
    } else {
      current_value_ -= objective_.modular_values().at(item.id);
    }
  }

  bool fits(const Item& item) const {
    const Rational one(1);
    for (const auto& [dim, w] : item.weights.entries()) {
      auto it = load_.find(dim);
      if (it != load_.end() && it->second + w > one) return false;
    }
    return true;
  }

  void dfs(size_t depth) {
    ++result_.explored;
    if (depth == items_.size()) {
      if (current_value_ > result_.best_value) {
        result_.best_value = current_value_;
        result_.best_set = std::set<ItemId>(current_.begin(), current_.end());
      }
      return;
    }
    if (completion_value(depth) <= result_.best_value) return;
    const Item& item = items_[depth];
    if (fits(item)) {
      take(item);
      dfs(depth + 1);
      untake(item);
    }
    dfs(depth + 1);
  }

  const std::vector<Item>& items_;
  const Objective& objective_;
  std::map<Dim, Rational> load_;
  std::map<ElementId, int> covered_;
  Rational current_value_;
  std::vector<ItemId> current_;
  std::vector<Rational> suffix_value_;
  std::vector<std::set<ElementId>> suffix_elements_;
  OptResult result_;
};

}  // namespace

OptResult brute_force_opt(const std::vector<Item>& items, const Objective& objective) {
  if (items.size() > 30) {
    throw CapacityError("brute_force_opt: more than 30 items; refusing exhaustive search");
  }
  return BranchAndBound(items, objective).solve();
}

bool verify_claimed_opt(const std::vector<Item>& items, const Objective& objective,
                        const std::set<ItemId>& claimed_set, const Rational& claimed_value) {
  std::vector<const Item*> chosen;
  Dim dims = items.empty() ? 0 : items.front().weights.dim_count();
  for (const Item& item : items) {
    if (claimed_set.count(item.id) != 0) chosen.push_back(&item);
  }
  if (chosen.size() != claimed_set.size()) return false;  // unknown ids claimed
  if (!is_feasible(std::span<const Item* const>(chosen), dims)) return false;
  return objective.evaluate(claimed_set) == claimed_value;
}

}  // namespace ovp
