#include <doctest.h>

#include "ovpack/engine.hpp"
#include "ovpack/errors.hpp"
#include "ovpack/generators.hpp"
#include "ovpack/trial.hpp"
#include "support/dense_sim.hpp"
#include "support/helpers.hpp"

using namespace ovp;
using testsupport::make_item;

namespace {

// d = 1, epsilon = 3/4: margin 1/4, threshold 1/2, tolerance 1/4.
struct Quarter {
  AlgorithmParams params = make_params(Rational(3, 4));
  Objective objective = Objective::modular({});
  FractionalState state{1};

  StepOutcome feed(ItemId id, long value_num, long value_den, long w_num, long w_den) {
    Item item = make_item(id, 1, {{0, w_num, w_den}}, value_num, value_den);
    objective.register_item(item);
    return observe_item(state, item, objective, params);
  }
};

bool same_algorithmic_state(const FractionalState& a, const FractionalState& b) {
  return a.held == b.held && a.ever_accepted == b.ever_accepted && a.load == b.load;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("lone item with room climbs to the cap") {
    Quarter q;
    const StepOutcome out = q.feed(0, 1, 1, 1, 4);
    CHECK(out.accepted);
    CHECK(out.final_fraction == Rational(1));
    CHECK(out.trace.stop_reason == StopReason::kFractionCapReached);
    CHECK(q.state.held.at(0) == Rational(1));
    CHECK(q.state.kept_set() == std::set<ItemId>{0});
    CHECK(q.state.load.at(0) == Rational(1, 4));  // exactly the margin
    CHECK(out.audit.all_pass());
  }

  TEST_CASE("a much denser newcomer displaces the incumbent completely") {
    Quarter q;
    q.feed(0, 1, 1, 1, 4);
    const StepOutcome out = q.feed(1, 10, 1, 1, 4);
    CHECK(out.accepted);
    CHECK(out.final_fraction == Rational(1));
    // The incumbent's fraction hits zero exactly at the cap.
    REQUIRE(out.trace.events.size() == 2);
    CHECK(out.trace.events[0].kind == PhaseEventKind::kItemFractionHitZero);
    CHECK(out.trace.events[0].item == 0);
    CHECK(out.trace.events[0].fraction == Rational(1));
    CHECK(out.trace.events[1].kind == PhaseEventKind::kFractionCapReached);
    CHECK(out.disposed == std::vector<ItemId>{0});
    CHECK(q.state.kept_set() == std::set<ItemId>{1});
    CHECK(q.state.held.count(0) == 0);
    CHECK(q.state.ever_accepted.at(0) == Rational(1));  // peaks never decrease
    CHECK(out.audit.all_pass());
  }

  TEST_CASE("a cheap newcomer is discarded before moving") {
    Quarter q;
    q.feed(0, 1, 1, 1, 4);
    const FractionalState before = q.state;
    const StepOutcome out = q.feed(1, 1, 10, 1, 4);
    CHECK(!out.accepted);
    CHECK(out.final_fraction == Rational(0));
    REQUIRE(out.trace.events.size() == 1);
    CHECK(out.trace.events[0].kind == PhaseEventKind::kStopConditionMet);
    CHECK(out.trace.events[0].fraction == Rational(0));
    CHECK(same_algorithmic_state(before, q.state));
    CHECK(out.audit.all_pass());
  }

  TEST_CASE("zero-value items exit at zero under the strict condition") {
    Quarter q;
    const StepOutcome out = q.feed(0, 0, 1, 1, 4);
    CHECK(!out.accepted);
    CHECK(out.final_fraction == Rational(0));
    CHECK(q.state.kept_set().empty());
  }

  TEST_CASE("items with no weight anywhere are accepted at the cap") {
    AlgorithmParams params = make_params(Rational(3, 4));
    Objective objective = Objective::modular({});
    FractionalState state{3};
    Item item;
    item.id = 0;
    item.weights = SparseWeightVector({}, 3);
    item.value = Rational(5);
    objective.register_item(item);
    const StepOutcome out = observe_item(state, item, objective, params);
    CHECK(out.accepted);
    CHECK(out.final_fraction == Rational(1));
  }

  TEST_CASE("saturation jump can trip the stop condition at the same point") {
    // Two dimensions, margin 1/2 (epsilon 1/2). Kept: P carries 1/2 on
    // dim 0 at fraction 1 (dim 0 saturated, density 1), Q carries 1/2 on
    // dim 1 at fraction 1/2 (load 1/4). The newcomer uses 1/2 on both.
    // Dim 1 fills at rate 1/2 and saturates at fraction 1/2; the loss sum
    // jumps from 1/2 to 1/2 + (1/2)*(1/4) = 5/8 >= gamma * value, so the
    // stop fires at the same fraction, below the commit threshold.
    const AlgorithmParams params = make_params(Rational(1, 2));
    Objective objective = Objective::modular({});
    FractionalState state{2};

    Item p = make_item(0, 2, {{0, 1, 2}}, 1, 2);
    Item q = make_item(1, 2, {{1, 1, 2}}, 1, 8);
    objective.register_item(p);
    objective.register_item(q);
    state.items.emplace(0, p);
    state.items.emplace(1, q);
    state.value_at_arrival[0] = Rational(1, 2);
    state.value_at_arrival[1] = Rational(1, 8);
    state.held[0] = Rational(1);
    state.held[1] = Rational(1, 2);
    state.ever_accepted[0] = Rational(1);
    state.ever_accepted[1] = Rational(1);
    state.recompute_loads();
    state.observed_sparsity = 1;

    Item u = make_item(2, 2, {{0, 1, 2}, {1, 1, 2}}, 4, 1);
    objective.register_item(u);
    const FractionalState before = state;
    const StepOutcome out = observe_item(state, u, objective, params);

    CHECK(!out.accepted);
    CHECK(out.final_fraction == Rational(1, 2));
    REQUIRE(out.trace.events.size() == 2);
    CHECK(out.trace.events[0].kind == PhaseEventKind::kDimSaturated);
    CHECK(out.trace.events[0].dim == 1);
    CHECK(out.trace.events[0].fraction == Rational(1, 2));
    CHECK(out.trace.events[1].kind == PhaseEventKind::kStopConditionMet);
    CHECK(out.trace.events[1].fraction == Rational(1, 2));
    CHECK(same_algorithmic_state(before, state));
  }

  TEST_CASE("shared disposal pressure resolves to exact balancing speeds") {
    // Three dimensions at the margin (1/2). P is the cheapest item on
    // dims 0 and 1, R on dim 2 while also relieving dim 0. The newcomer
    // needs P faster for dim 1 than for dim 0, so dim 1 takes P over,
    // dim 0 is left falling, and the solved speeds are P: 5/8, R: 1/2 —
    // visible in the committed fractions after the full phase.
    const AlgorithmParams params = make_params(Rational(1, 2));
    Objective objective = Objective::modular({});
    FractionalState state{3};

    Item p = make_item(0, 3, {{0, 1, 4}, {1, 1, 2}}, 1, 64);
    Item r = make_item(1, 3, {{0, 1, 4}, {2, 1, 2}}, 1, 32);
    for (const Item* it : {&p, &r}) {
      objective.register_item(*it);
      state.items.emplace(it->id, *it);
      state.value_at_arrival[it->id] = it->value;
      state.held[it->id] = Rational(1);
      state.ever_accepted[it->id] = Rational(1);
    }
    state.recompute_loads();
    state.observed_sparsity = 2;
    REQUIRE(state.load.at(0) == Rational(1, 2));
    REQUIRE(state.load.at(1) == Rational(1, 2));
    REQUIRE(state.load.at(2) == Rational(1, 2));

    Item u = make_item(2, 3, {{0, 1, 4}, {1, 5, 16}, {2, 1, 4}}, 1, 1);
    objective.register_item(u);
    const StepOutcome out = observe_item(state, u, objective, params);

    CHECK(out.accepted);
    CHECK(out.final_fraction == Rational(1));
    // P decreased at speed 5/8 (dim 1's balance), R at 1/2 (dim 2's).
    CHECK(out.trace.x_final.at(0) == Rational(3, 8));
    CHECK(out.trace.x_final.at(1) == Rational(1, 2));
    // P's remaining fraction falls below the margin and is disposed of.
    CHECK(out.disposed == std::vector<ItemId>{0});
    CHECK(state.held.count(0) == 0);
    CHECK(state.held.at(1) == Rational(1, 2));
    CHECK(state.held.at(2) == Rational(1));
    CHECK(out.audit.all_pass());
  }

  TEST_CASE("protocol errors") {
    Quarter q;
    q.feed(0, 1, 1, 1, 4);
    q.feed(5, 1, 1, 1, 4);
    Item dup = make_item(5, 1, {{0, 1, 8}}, 1, 1);
    CHECK_THROWS_AS(observe_item(q.state, dup, q.objective, q.params), ProtocolError);
    Item out_of_order = make_item(3, 1, {{0, 1, 8}}, 1, 1);
    CHECK_THROWS_AS(observe_item(q.state, out_of_order, q.objective, q.params),
                    ProtocolError);
    Item wrong_dims = make_item(7, 2, {{0, 1, 8}}, 1, 1);
    CHECK_THROWS_AS(observe_item(q.state, wrong_dims, q.objective, q.params), ProtocolError);
    // margin is 1/4; a weight above it breaks the declared slack
    Item too_heavy = make_item(8, 1, {{0, 1, 2}}, 1, 1);
    CHECK_THROWS_AS(observe_item(q.state, too_heavy, q.objective, q.params), ProtocolError);
  }

  TEST_CASE("audit passes vacuously on the empty state") {
    FractionalState state{4};
    const InvariantAudit audit =
        audit_state(state, Objective::cardinality(), make_params(Rational(1, 2)));
    CHECK(audit.ran);
    CHECK(audit.all_pass());
    CHECK(audit.checks.size() == 7);
  }

  TEST_CASE("audit names a surviving small fraction") {
    // A held fraction of margin/2 must have been disposed of; the audit
    // points at the offending item.
    const AlgorithmParams params = make_params(Rational(3, 4));
    Objective objective = Objective::modular({{3, Rational(1)}});
    FractionalState state{1};
    Item bad = make_item(3, 1, {{0, 1, 8}}, 1, 1);
    state.items.emplace(3, bad);
    state.value_at_arrival[3] = Rational(1);
    state.held[3] = Rational(1, 8);  // below the margin 1/4
    state.ever_accepted[3] = Rational(1);
    state.recompute_loads();
    const InvariantAudit audit = audit_state(state, objective, params);
    CHECK(!audit.all_pass());
    bool found = false;
    for (const CheckResult& c : audit.checks) {
      if (c.name == "fraction_ranges" && !c.pass) {
        found = true;
        CHECK(c.detail.find("3") != std::string::npos);
      }
    }
    CHECK(found);
  }

  TEST_CASE("audit numbers of the displacement example") {
    Quarter q;
    q.feed(0, 1, 1, 1, 4);
    q.feed(1, 10, 1, 1, 4);
    // peak-weighted values: 1*1 + 10*1 = 11 <= 2 * v(S) = 20.
    Rational peak;
    for (const auto& [id, a] : q.state.ever_accepted) {
      peak += q.state.value_at_arrival.at(id) * a;
    }
    CHECK(peak == Rational(11));
    Rational kept_value;
    for (ItemId id : q.state.kept_set()) kept_value += q.state.value_at_arrival.at(id);
    CHECK(kept_value == Rational(10));
    const InvariantAudit audit = audit_state(q.state, q.objective, q.params);
    CHECK(audit.all_pass());
  }

  TEST_CASE("identical sequences give identical traces") {
    auto play = [] {
      std::vector<std::string> log;
      Quarter q;
      for (const auto& [id, vn, wn] :
           std::vector<std::tuple<ItemId, long, long>>{{0, 1, 1}, {1, 10, 1}, {2, 3, 1}}) {
        const StepOutcome out = q.feed(id, vn, 1, wn, 4);
        log.push_back(std::to_string(id) + (out.accepted ? "+" : "-") +
                      out.final_fraction.str());
        for (const PhaseEvent& e : out.trace.events) {
          log.push_back(e.fraction.str() + ":" + std::to_string(static_cast<int>(e.kind)));
        }
      }
      return log;
    };
    CHECK(play() == play());
  }

  TEST_CASE("every audit passes along a random walk") {
    const Instance long_walk =
        gen_random(40, 6, 3, Rational(1, 2), ValueMode::kUniform, 99);
    const TrialReport long_report = run_trial(long_walk, Rational(1, 2), true);
    CHECK(long_report.audits_all_ok);

    const Instance instance =
        gen_random(22, 6, 3, Rational(1, 2), ValueMode::kUniform, 99);
    const TrialReport report = run_trial(instance, Rational(1, 2), true);
    CHECK(report.audits_all_ok);
    CHECK(report.bound_checked);
    CHECK(report.bound_ok);
  }
}
