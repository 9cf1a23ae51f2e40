#pragma once

#include <memory>
#include <string>

#include "ovpack/algorithms.hpp"
#include "ovpack/trial.hpp"

namespace ovp {

struct DuelConfig {
  std::string adversary;  // slack-deterministic | slack-subsets
  int k = 4;
  Rational epsilon{1, 4};
  std::string algorithm = "engine";  // engine | greedy
  std::optional<Rational> engine_epsilon;
  bool audit = true;
};

struct DuelResult {
  TrialReport report;
  Instance transcript;  // replayable arrival sequence with the witness
};

std::unique_ptr<AdaptiveAdversary> make_adversary(const std::string& name, int k,
                                                  const Rational& epsilon);

// Alternates adversary.next_item(committed set) with the algorithm's
// observation until the adversary stops; the optimum comes from the
// adversary's certified witness.
DuelResult run_duel(const DuelConfig& config);

// The duel loop against any player; used by tests with stub algorithms.
Instance play_duel(AdaptiveAdversary& adversary, OnlineAlgorithm& algorithm);

}  // namespace ovp
