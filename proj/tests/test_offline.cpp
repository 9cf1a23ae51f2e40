#include <doctest.h>

#include "ovpack/algorithms.hpp"
#include "ovpack/duel.hpp"
#include "ovpack/errors.hpp"
#include "ovpack/offline.hpp"
#include "support/enumerate.hpp"
#include "support/helpers.hpp"

using namespace ovp;
using testsupport::enumerate_opt;
using testsupport::make_item;

TEST_SUITE("offline") {
  TEST_CASE("single item within capacity") {
    const std::vector<Item> items = {make_item(0, 2, {{0, 1, 2}, {1, 1, 3}})};
    const OptResult opt = brute_force_opt(items, Objective::cardinality());
    CHECK(opt.best_value == Rational(1));
    CHECK(opt.best_set == std::set<ItemId>{0});
  }

  TEST_CASE("dyadic-phase instance optimum equals the leader chain") {
    const NoSlackSample sample = sample_noslack(4, 11);
    const OptResult opt =
        brute_force_opt(sample.instance.items, sample.instance.objective());
    CHECK(opt.best_value == Rational(4));
    CHECK(verify_claimed_opt(sample.instance.items, sample.instance.objective(),
                             opt.best_set, opt.best_value));
  }

  TEST_CASE("big-versus-small duel transcript optimum") {
    // k = 4, epsilon = 1/4: the small value sqrt(eps/k) = 1/4 is exact,
    // so the 8 small items are worth exactly 2.
    auto adversary = adversary_slack_deterministic(4, Rational(1, 4));
    testsupport::KeepAllAlgorithm keeper;
    const Instance transcript = play_duel(*adversary, keeper);
    CHECK(transcript.items.size() == 9);
    const OptResult opt = brute_force_opt(transcript.items, transcript.objective());
    CHECK(opt.best_value == Rational(2));
    CHECK(opt.best_set.size() == 8);  // the small items beat the big one
  }

  TEST_CASE("claimed optima verify only when feasible and exact") {
    const std::vector<Item> items = {make_item(0, 1, {{0, 3, 4}}),
                                     make_item(1, 1, {{0, 3, 8}}),
                                     make_item(2, 1, {{0, 1, 4}})};
    const Objective f = Objective::cardinality();
    CHECK(verify_claimed_opt(items, f, {0, 2}, Rational(2)));
    CHECK(!verify_claimed_opt(items, f, {0, 1}, Rational(2)));  // 9/8 over capacity
    CHECK(!verify_claimed_opt(items, f, {0, 2}, Rational(3)));  // wrong value
    CHECK(!verify_claimed_opt(items, f, {0, 9}, Rational(2)));  // unknown id
  }

  TEST_CASE("branch and bound equals plain enumeration") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
      const size_t n = 1 + seed % 12;
      const Instance instance = gen_random(
          n, 4, 2, Rational(1, 4),
          seed % 3 == 0 ? ValueMode::kUnit
                        : (seed % 3 == 1 ? ValueMode::kUniform : ValueMode::kCoverage),
          seed);
      const Objective f = instance.objective();
      const OptResult fast = brute_force_opt(instance.items, f);
      const OptResult slow = enumerate_opt(instance.items, f);
      CHECK(fast.best_value == slow.best_value);
      CHECK(verify_claimed_opt(instance.items, f, fast.best_set, fast.best_value));
    }
  }

  TEST_CASE("pruning explores fewer subsets than the full scan") {
    const Instance instance = gen_random(14, 4, 2, Rational(1, 4), ValueMode::kUniform, 5);
    const Objective f = instance.objective();
    const OptResult fast = brute_force_opt(instance.items, f);
    CHECK(fast.explored < (1ull << 15));
  }

  TEST_CASE("the optimum dominates whatever the engine keeps") {
    for (uint64_t seed = 50; seed < 60; ++seed) {
      const Instance instance =
          gen_random(12, 5, 2, Rational(1, 2), ValueMode::kUniform, seed);
      const Objective f = instance.objective();
      EngineAlgorithm engine(instance.dims, f, make_params(Rational(1, 2)), false);
      for (const Item& item : instance.items) engine.observe(item);
      const OptResult opt = brute_force_opt(instance.items, f);
      CHECK(opt.best_value >= f.evaluate(engine.committed()));
    }
  }

  TEST_CASE("size guard refuses oversized searches") {
    std::vector<Item> items;
    for (ItemId id = 0; id < 31; ++id) items.push_back(make_item(id, 1, {{0, 1, 64}}));
    CHECK_THROWS_AS(brute_force_opt(items, Objective::cardinality()), CapacityError);
  }

  TEST_CASE("empty instance") {
    const OptResult opt = brute_force_opt({}, Objective::cardinality());
    CHECK(opt.best_value == Rational(0));
    CHECK(opt.best_set.empty());
  }
}
