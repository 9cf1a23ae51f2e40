#include <doctest.h>

#include <cmath>

#include "ovpack/engine.hpp"
#include "ovpack/generators.hpp"
#include "ovpack/objective.hpp"
#include "support/dense_sim.hpp"
#include "support/helpers.hpp"

using namespace ovp;
using testsupport::dense_simulate_phase;
using testsupport::make_item;

namespace {

constexpr double kStep = 1.0 / (1 << 20);

// Runs engine and fixed-step simulator side by side over one instance,
// comparing the per-arrival decision and final fraction.
void compare_on(const Instance& instance, const Rational& epsilon) {
  const AlgorithmParams params = make_params(epsilon);
  Objective objective = instance.objective();
  FractionalState state(instance.dims, objective.f_empty());
  for (const Item& item : instance.items) {
    objective.register_item(item);
    const Rational value = objective.marginal(state.ever_set(), item.id);
    const auto naive = dense_simulate_phase(state, item, value, params);
    const StepOutcome out = observe_item(state, item, objective, params, false);
    CAPTURE(instance.meta.seed);
    CAPTURE(item.id);
    CHECK(out.accepted == naive.accepted);
    CHECK(std::abs(out.final_fraction.to_double() - naive.final_fraction) <= kStep);
  }
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("fixed-step simulator reproduces the hand-traced examples") {
    const AlgorithmParams params = make_params(Rational(3, 4));
    FractionalState state(1);
    const Item first = make_item(0, 1, {{0, 1, 4}}, 1, 1);
    auto naive = dense_simulate_phase(state, first, Rational(1), params);
    CHECK(naive.accepted);
    CHECK(naive.final_fraction == 1.0);

    // commit it, then displace with the ten-times denser item
    Objective obj = Objective::modular({});
    obj.register_item(first);
    observe_item(state, first, obj, params, false);
    const Item second = make_item(1, 1, {{0, 1, 4}}, 10, 1);
    naive = dense_simulate_phase(state, second, Rational(10), params);
    CHECK(naive.accepted);
    CHECK(naive.final_fraction == 1.0);

    // and the item too cheap to move at all
    const Item cheap = make_item(2, 1, {{0, 1, 4}}, 1, 10);
    obj.register_item(second);
    observe_item(state, second, obj, params, false);
    naive = dense_simulate_phase(state, cheap, Rational(1, 10), params);
    CHECK(!naive.accepted);
    CHECK(naive.final_fraction == 0.0);
  }

  TEST_CASE("engine and simulator agree on random instances") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
      const size_t n = 1 + seed % 12;
      const Dim d = static_cast<Dim>(1 + seed % 5);
      const size_t k = 1 + seed % std::min<uint64_t>(d, 3);
      const Rational epsilon =
          seed % 3 == 0 ? Rational(3, 4) : (seed % 3 == 1 ? Rational(1, 2) : Rational(1, 4));
      const ValueMode mode = seed % 2 ? ValueMode::kUniform : ValueMode::kUnit;
      compare_on(gen_random(n, d, k, epsilon, mode, seed), epsilon);
    }
  }
}
