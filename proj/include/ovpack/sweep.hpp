#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovpack/trial.hpp"

namespace ovp {

// A Monte-Carlo sweep: `trials` independent samples of one distribution,
// seeds seed0 .. seed0+trials-1, each run through the engine.
struct SweepConfig {
  std::string distribution;  // slack-random | noslack | smallweight | random

  // slack-random
  int ell = 4;
  bool shuffle_within_phase = false;
  // noslack
  int d = 8;
  // smallweight
  Rational epsilon_w{1, 4};
  // random
  size_t n = 10;
  Dim rdims = 5;
  size_t k = 2;
  ValueMode mode = ValueMode::kUnit;
  // slack for slack-random / random instances
  Rational epsilon{1, 4};

  std::optional<Rational> engine_epsilon;  // default: tightest slack per sample
  size_t trials = 1;
  uint64_t seed0 = 0;
  bool audit = true;
  int threads = 0;  // 0: library default
};

struct SweepReport {
  SweepConfig config;
  std::vector<TrialReport> rows;  // by trial index

  Rational mean_f;       // exact mean of f(S)
  double stderr_f = 0;   // sample standard error, independent seeds
  double mean_kept = 0;  // mean |S|

  bool witness_all_equal = false;  // every sample's witness hit the same value
  Rational witness_value;

  // The distribution's expected-value ceiling evaluated at these
  // parameters (harmonic sums); unset for `random`.
  bool bound_defined = false;
  Rational bound_value;
  bool bound_ok = true;  // mean <= bound + 3 * stderr

  double empirical_ratio = 0;  // witness opt / mean f(S), when defined

  // slack-random extra: fraction of seeds with |S| <= opt/2.
  double share_kept_at_most_half_opt = 0;
};

Instance sample_for(const SweepConfig& config, uint64_t seed);

// Expected-value ceiling of the engine's objective under the distribution.
std::optional<Rational> sweep_bound(const SweepConfig& config);

// The OpenMP kernel: trials run in parallel, one engine state per trial;
// the aggregate is a sum of exact rationals, identical under any
// interleaving. The serial variant is the reference the tests and the
// benchmark compare against.
SweepReport run_sweep(const SweepConfig& config);
SweepReport run_sweep_serial(const SweepConfig& config);

nlohmann::json sweep_to_json(const SweepReport& report);
std::string sweep_to_csv(const SweepReport& report);

}  // namespace ovp
