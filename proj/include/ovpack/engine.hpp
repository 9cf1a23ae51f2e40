#pragma once

#include <map>
#include <string>
#include <vector>

#include "ovpack/objective.hpp"
#include "ovpack/params.hpp"
#include "ovpack/rational.hpp"
#include "ovpack/state.hpp"
#include "ovpack/types.hpp"

namespace ovp {

// What happened at one point of the continuous per-arrival process.
enum class PhaseEventKind {
  kDimSaturated,         // a dimension's load reached the capacity margin
  kDimUnsaturated,       // a saturated dimension's load left the margin
  kItemFractionHitZero,  // a decreasing fraction reached exactly zero
  kArgminChanged,        // a saturated dimension switched its cheapest item
  kStopConditionMet,     // loss rate caught up with the newcomer's value
  kFractionCapReached,   // the newcomer's fraction reached 1
};

struct PhaseEvent {
  Rational fraction;  // value of the increasing fraction at the event
  PhaseEventKind kind;
  Dim dim = 0;             // saturation / argmin events
  ItemId item = 0;         // zero-hit item, or new argmin
  ItemId prev_item = 0;    // previous argmin (argmin changes only)
};

enum class StopReason { kStopConditionMet, kFractionCapReached };

// Full record of one arrival's continuous phase: the trajectory is
// piecewise affine in the newcomer's fraction, so the event list plus
// the final vector describe it exactly.
struct PhaseTrace {
  Rational final_fraction;
  std::map<ItemId, Rational> x_final;  // includes the newcomer's coordinate
  std::vector<PhaseEvent> events;
  StopReason stop_reason = StopReason::kStopConditionMet;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct InvariantAudit {
  bool ran = false;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  std::string first_failure() const {
    for (const auto& c : checks) {
      if (!c.pass) return c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
    }
    return {};
  }
};

struct StepOutcome {
  bool accepted = false;
  Rational final_fraction;
  std::vector<ItemId> disposed;  // previously kept items fully dropped this round
  Rational value;                // frozen marginal value of the arrival
  PhaseTrace trace;
  InvariantAudit audit;
};

// Simulates the continuous fraction-raising process for one arrival
// event-by-event in exact arithmetic. Pure with respect to the state.
//
// The newcomer's fraction rises at unit rate; on every saturated
// dimension the newcomer uses, the cheapest (lowest density) kept item
// is decreased just fast enough to keep the load at the margin. The
// process stops when the fraction reaches 1 or when the aggregated loss
// rate reaches loss_tolerance times the newcomer's value.
PhaseTrace run_phase(const FractionalState& state, const Item& item,
                     const Rational& item_value, const AlgorithmParams& params);

// One full online round: freeze the arrival's marginal value, run the
// continuous phase, and commit the result if the final fraction reached
// the commit threshold (dropping every fraction that fell below the
// capacity margin). On rejection the algorithmic state (held,
// ever_accepted, load) is bit-identical to before; only bookkeeping
// (observed ids, frozen values) grows.
StepOutcome observe_item(FractionalState& state, const Item& item,
                         const Objective& objective, const AlgorithmParams& params,
                         bool with_audit = true);

// Verifies, exactly, every invariant the analysis promises between
// arrivals. Reports; never throws.
InvariantAudit audit_state(const FractionalState& state, const Objective& objective,
                           const AlgorithmParams& params);

}  // namespace ovp
