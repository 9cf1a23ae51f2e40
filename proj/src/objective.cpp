#include "ovpack/objective.hpp"

#include <algorithm>

#include "ovpack/errors.hpp"

namespace ovp {

Objective Objective::cardinality() { return Objective(Kind::kCardinality); }

Objective Objective::modular(std::map<ItemId, Rational> values) {
  Objective o(Kind::kModular);
  for (const auto& [id, v] : values) {
    (void)id;
    if (v.sign() < 0) throw ParamError("modular objective: negative value");
  }
  o.values_ = std::move(values);
  return o;
}

Objective Objective::coverage(std::map<ItemId, std::vector<ElementId>> covers,
                              std::map<ElementId, Rational> element_weights) {
  Objective o(Kind::kCoverage);
  for (const auto& [e, w] : element_weights) {
    (void)e;
    if (w.sign() < 0) throw ParamError("coverage objective: negative element weight");
  }
  o.covers_ = std::move(covers);
  o.element_weights_ = std::move(element_weights);
  return o;
}

void Objective::register_item(const Item& item) {
  switch (kind_) {
    case Kind::kCardinality:
      return;
    case Kind::kModular:
      if (item.value.sign() < 0) throw ParamError("modular objective: negative value");
      values_.try_emplace(item.id, item.value);
      return;
    case Kind::kCoverage:
      covers_.try_emplace(item.id, item.covers);
      return;
  }
}

const Rational& Objective::value_of(ItemId u) const {
  auto it = values_.find(u);
  if (it == values_.end()) throw LookupError("objective: unknown item id " + std::to_string(u));
  return it->second;
}

const std::vector<ElementId>& Objective::covers_of(ItemId u) const {
  auto it = covers_.find(u);
  if (it == covers_.end()) throw LookupError("objective: unknown item id " + std::to_string(u));
  return it->second;
}

Rational Objective::marginal(const std::set<ItemId>& base, ItemId u) const {
  if (base.count(u) != 0) throw ParamError("marginal: item already in base set");
  switch (kind_) {
    case Kind::kCardinality:
      return Rational(1);
    case Kind::kModular:
      return value_of(u);
    case Kind::kCoverage: {
      std::set<ElementId> covered;
      for (ItemId v : base) {
        const auto& c = covers_of(v);
        covered.insert(c.begin(), c.end());
      }
      Rational gain;
      std::set<ElementId> fresh;
      for (ElementId e : covers_of(u)) {
        if (covered.count(e) == 0 && fresh.insert(e).second) {
          auto w = element_weights_.find(e);
          gain += w == element_weights_.end() ? Rational(1) : w->second;
        }
      }
      return gain;
    }
  }
  throw InternalError("marginal: unreachable");
}

Rational Objective::evaluate(const std::set<ItemId>& ids) const {
  switch (kind_) {
    case Kind::kCardinality:
      return Rational(static_cast<long>(ids.size()));
    case Kind::kModular: {
      Rational total;
      for (ItemId u : ids) total += value_of(u);
      return total;
    }
    case Kind::kCoverage: {
      std::set<ElementId> covered;
      for (ItemId u : ids) {
        const auto& c = covers_of(u);
        covered.insert(c.begin(), c.end());
      }
      Rational total;
      for (ElementId e : covered) {
        auto w = element_weights_.find(e);
        total += w == element_weights_.end() ? Rational(1) : w->second;
      }
      return total;
    }
  }
  throw InternalError("evaluate: unreachable");
}

Objective objective_from_items(Objective::Kind kind, const std::vector<Item>& items,
                               std::map<ElementId, Rational> element_weights) {
  switch (kind) {
    case Objective::Kind::kCardinality:
      return Objective::cardinality();
    case Objective::Kind::kModular: {
      std::map<ItemId, Rational> values;
      for (const auto& it : items) values[it.id] = it.value;
      return Objective::modular(std::move(values));
    }
    case Objective::Kind::kCoverage: {
      std::map<ItemId, std::vector<ElementId>> covers;
      for (const auto& it : items) covers[it.id] = it.covers;
      return Objective::coverage(std::move(covers), std::move(element_weights));
    }
  }
  throw InternalError("objective_from_items: unreachable");
}

}  // namespace ovp
