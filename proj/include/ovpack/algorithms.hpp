#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "ovpack/engine.hpp"
#include "ovpack/objective.hpp"
#include "ovpack/params.hpp"
#include "ovpack/state.hpp"
#include "ovpack/types.hpp"

namespace ovp {

// Anything that can play the online game: sees one item at a time, keeps
// a feasible set, may drop previously accepted items but never recover
// them. Adversaries probe the committed set between arrivals.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual void observe(const Item& item) = 0;
  virtual std::set<ItemId> committed() const = 0;
};

// The fractional-threshold engine behind the OnlineAlgorithm interface.
class EngineAlgorithm : public OnlineAlgorithm {
 public:
  EngineAlgorithm(Dim dims, Objective objective, AlgorithmParams params, bool with_audit = true)
      : objective_(std::move(objective)),
        params_(std::move(params)),
        state_(dims, objective_.f_empty()),
        with_audit_(with_audit) {}

  void observe(const Item& item) override {
    objective_.register_item(item);
    outcomes_.push_back(observe_item(state_, item, objective_, params_, with_audit_));
  }

  std::set<ItemId> committed() const override { return state_.kept_set(); }

  const FractionalState& state() const { return state_; }
  const Objective& objective() const { return objective_; }
  const AlgorithmParams& params() const { return params_; }
  const std::vector<StepOutcome>& outcomes() const { return outcomes_; }

 private:
  Objective objective_;
  AlgorithmParams params_;
  FractionalState state_;
  bool with_audit_;
  std::vector<StepOutcome> outcomes_;
};

// Baseline: accept whenever the item fits next to everything currently
// kept; never dispose. The natural strawman the adversaries also beat.
class GreedyAlgorithm : public OnlineAlgorithm {
 public:
  explicit GreedyAlgorithm(Dim dims) : dims_(dims) {}

  void observe(const Item& item) override;
  std::set<ItemId> committed() const override { return kept_; }

 private:
  Dim dims_;
  std::set<ItemId> kept_;
  std::map<Dim, Rational> load_;
  std::vector<Item> items_;
};

}  // namespace ovp
