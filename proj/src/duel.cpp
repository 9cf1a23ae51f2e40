#include "ovpack/duel.hpp"

#include <algorithm>

#include "ovpack/errors.hpp"

namespace ovp {

std::unique_ptr<AdaptiveAdversary> make_adversary(const std::string& name, int k,
                                                  const Rational& epsilon) {
  if (name == "slack-deterministic") return adversary_slack_deterministic(k, epsilon);
  if (name == "slack-subsets") return adversary_slack_subsets(k, epsilon);
  throw ParamError("unknown adversary '" + name + "'");
}

Instance play_duel(AdaptiveAdversary& adversary, OnlineAlgorithm& algorithm) {
  while (auto item = adversary.next_item(algorithm.committed())) {
    algorithm.observe(*item);
  }
  Instance transcript;
  transcript.dims = adversary.dims();
  transcript.objective_kind = adversary.objective_kind();
  transcript.items = adversary.emitted();
  transcript.witness = adversary.witness();
  return transcript;
}

DuelResult run_duel(const DuelConfig& config) {
  auto adversary = make_adversary(config.adversary, config.k, config.epsilon);

  // Tightest slack any emitted weight can need: the deterministic
  // adversary mixes 1-epsilon and 2*epsilon weights, the subsets one
  // uses 1-epsilon only.
  Rational engine_eps = config.epsilon;
  if (config.adversary == "slack-deterministic") {
    engine_eps = min(config.epsilon, Rational(1) - Rational(2) * config.epsilon);
  }
  if (config.engine_epsilon) engine_eps = *config.engine_epsilon;

  DuelResult result;
  Objective objective = config.adversary == "slack-deterministic"
                            ? Objective::modular({})
                            : Objective::cardinality();

  if (config.algorithm == "engine") {
    EngineAlgorithm engine(adversary->dims(), objective, make_params(engine_eps),
                           config.audit);
    result.transcript = play_duel(*adversary, engine);
    result.report.epsilon = engine_eps;
    result.report.observed_sparsity = engine.state().observed_sparsity;
    for (size_t i = 0; i < engine.outcomes().size(); ++i) {
      const StepOutcome& outcome = engine.outcomes()[i];
      ArrivalRecord rec;
      rec.id = result.transcript.items[i].id;
      rec.accepted = outcome.accepted;
      rec.final_fraction = outcome.final_fraction;
      rec.disposed = outcome.disposed;
      rec.value = outcome.value;
      rec.audit_ran = outcome.audit.ran;
      if (outcome.audit.ran && !outcome.audit.all_pass()) {
        rec.audit_ok = false;
        rec.audit_failure = outcome.audit.first_failure();
        if (result.report.audits_all_ok) {
          result.report.audits_all_ok = false;
          result.report.first_audit_failure = rec.audit_failure;
        }
      }
      result.report.arrivals.push_back(std::move(rec));
    }
    result.report.final_kept = engine.committed();
    result.report.f_kept = engine.objective().evaluate(result.report.final_kept);
    result.report.bound_multiplier = competitive_bound_multiplier(
        engine.params(), engine.state().observed_sparsity);
  } else if (config.algorithm == "greedy") {
    GreedyAlgorithm greedy(adversary->dims());
    result.transcript = play_duel(*adversary, greedy);
    result.report.algorithm = "greedy";
    result.report.epsilon = engine_eps;
    for (const Item& item : result.transcript.items) {
      result.report.observed_sparsity =
          std::max(result.report.observed_sparsity, item.weights.sparsity());
    }
    Objective obj = result.transcript.objective();
    result.report.final_kept = greedy.committed();
    result.report.f_kept = obj.evaluate(result.report.final_kept);
    for (const Item& item : result.transcript.items) {
      ArrivalRecord rec;
      rec.id = item.id;
      rec.accepted = result.report.final_kept.count(item.id) != 0;
      rec.final_fraction = Rational(rec.accepted ? 1 : 0);
      result.report.arrivals.push_back(std::move(rec));
    }
  } else {
    throw ParamError("unknown duel algorithm '" + config.algorithm + "'");
  }

  result.transcript.meta = {"duel-" + config.adversary,
                            "k=" + std::to_string(config.k) +
                                ",epsilon=" + config.epsilon.str() +
                                ",algorithm=" + config.algorithm,
                            0};
  result.report.meta = result.transcript.meta;
  result.report.n_items = result.transcript.items.size();

  result.report.opt_source = OptSource::kWitness;
  result.report.opt_value = result.transcript.witness->value;
  if (result.report.f_kept.sign() > 0) {
    result.report.ratio_defined = true;
    result.report.ratio = result.report.opt_value / result.report.f_kept;
  } else if (result.report.opt_value.sign() == 0) {
    result.report.ratio_defined = true;
    result.report.ratio = Rational(1);
  } else {
    result.report.ratio_infinite = true;
  }
  if (config.algorithm == "engine") {
    result.report.bound = result.report.bound_multiplier * result.report.f_kept;
    result.report.bound_checked = true;
    result.report.bound_ok = result.report.opt_value <= result.report.bound;
  }
  return result;
}

}  // namespace ovp
