#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ovpack/objective.hpp"
#include "ovpack/rational.hpp"
#include "ovpack/rng.hpp"
#include "ovpack/types.hpp"

namespace ovp {

// An explicitly constructed feasible set certifying a lower bound on the
// offline optimum.
struct Witness {
  std::set<ItemId> ids;
  Rational value;
};

struct InstanceMeta {
  std::string generator;  // "file", "random", "noslack", ...
  std::string params;
  uint64_t seed = 0;
};

// A full arrival sequence plus its objective; hardness samplers attach
// their analytic optimum witness (verified feasible at construction).
struct Instance {
  Dim dims = 0;
  Objective::Kind objective_kind = Objective::Kind::kCardinality;
  std::map<ElementId, Rational> element_weights;  // coverage objectives only
  std::vector<Item> items;
  std::optional<Witness> witness;
  InstanceMeta meta;

  Objective objective() const {
    return objective_from_items(objective_kind, items, element_weights);
  }
  Rational max_weight() const {
    Rational m;
    for (const auto& it : items) m = max(m, it.weights.max_weight());
    return m;
  }
};

// Instance builder that reacts to the algorithm it is playing against:
// the next item may depend on the committed set. Emits nullopt to stop.
class AdaptiveAdversary {
 public:
  virtual ~AdaptiveAdversary() = default;
  virtual std::optional<Item> next_item(const std::set<ItemId>& committed) = 0;
  virtual Dim dims() const = 0;
  virtual Objective::Kind objective_kind() const = 0;
  virtual const std::vector<Item>& emitted() const = 0;
  // Certified feasible witness for the emitted sequence; valid after stop.
  virtual Witness witness() const = 0;
};

// One big item on all k = d dimensions, then small items per dimension;
// stops as soon as the big item leaves the committed set. Forces any
// deterministic algorithm into a sqrt(k/epsilon)-sized regret.
std::unique_ptr<AdaptiveAdversary> adversary_slack_deterministic(int k, const Rational& epsilon);

// Adaptive k-subset construction over d = 2k^2 dimensions: every arrival
// conflicts with the currently kept item on a dimension nobody else has
// touched, while at least k mutually non-conflicting items accumulate.
std::unique_ptr<AdaptiveAdversary> adversary_slack_subsets(int k, const Rational& epsilon);

// Randomized phase construction with k = 100*l*log2(l)+1 over
// d = l + 400*l^2*log2(l) dimensions; one hidden good item per phase.
struct SlackRandomSample {
  Instance instance;
  std::vector<ItemId> good;                  // one per phase
  std::vector<std::vector<ItemId>> phases;   // arrival ids per phase
};
SlackRandomSample sample_slack_random(int ell, const Rational& epsilon, uint64_t seed,
                                      bool shuffle_within_phase = false);

// No-slack dyadic construction: d phases, delta = 2^-2d, one leading item
// per phase extends the optimal chain.
struct NoSlackSample {
  Instance instance;
  std::vector<Dim> sigma;                      // sampled permutation, 0-based
  std::vector<std::vector<ItemId>> ids_by_phase;  // [t-1][j-1] = id of item (t,j)
  Rational delta;
};
NoSlackSample sample_noslack(int d, uint64_t seed);

// Every non-leading item (t, j >= 2) has a twin one phase later whose
// weight vector is the three-step transform of its own: the revealed
// coordinate zeroed, the heavy coordinate deepened, the light ones
// doubled. Swapping an item for its twin never costs feasibility.
inline std::pair<int, int> noslack_twin(int t, int j) { return {t + 1, j - 1}; }

// Arbitrarily small weights, factorial dimension growth: phase i blocks of
// size b_{i+1} = (2l-i)!/l!, 1/epsilon_w copies per type.
struct SmallWeightSample {
  Instance instance;
  std::vector<std::vector<std::vector<ItemId>>> copies;  // [phase][type][copy]
  std::vector<int> chosen_type;                          // sigma_i per phase, 0-based
  std::vector<std::vector<Dim>> phase_pool;              // J_i per phase
};
SmallWeightSample sample_smallweight(int ell, const Rational& epsilon_w, uint64_t seed);

enum class ValueMode { kUnit, kUniform, kCoverage };

// Plumbing instances: n items with k uniform distinct dimensions each,
// weights uniform with denominator 2^16 in (0, 1-epsilon].
Instance gen_random(size_t n, Dim d, size_t k, const Rational& epsilon, ValueMode mode,
                    uint64_t seed);

}  // namespace ovp
