#include "ovpack/trial.hpp"

#include <sstream>

#include "ovpack/errors.hpp"
#include "ovpack/offline.hpp"

namespace ovp {
namespace {

using nlohmann::json;

json jrat(const Rational& r) {
  return json{{"exact", r.str()}, {"float", r.to_double()}};
}

}  // namespace

Rational competitive_bound_multiplier(const AlgorithmParams& params, size_t sparsity) {
  const Rational one(1), two(2);
  const Rational k(static_cast<long>(sparsity));
  return two / params.commit_threshold +
         two * k / (params.loss_tolerance * params.capacity_margin *
                    (one - params.commit_threshold));
}

Rational default_epsilon(const Instance& instance) {
  const Rational one(1);
  const Rational heaviest = instance.max_weight();
  if (heaviest >= one) {
    throw ParamError(
        "instance has a weight of 1; the engine needs slack (pass --epsilon after rescaling)");
  }
  if (heaviest.is_zero()) return Rational(1, 2);  // nothing constrains anything
  return one - heaviest;
}

TrialReport run_trial(const Instance& instance, const Rational& epsilon, bool with_audit,
                      bool compute_opt) {
  const AlgorithmParams params = make_params(epsilon);
  Objective objective = instance.objective();
  FractionalState state(instance.dims, objective.f_empty());

  TrialReport report;
  report.meta = instance.meta;
  report.epsilon = epsilon;
  report.n_items = instance.items.size();

  for (const Item& item : instance.items) {
    objective.register_item(item);
    StepOutcome outcome = observe_item(state, item, objective, params, with_audit);
    ArrivalRecord rec;
    rec.id = item.id;
    rec.accepted = outcome.accepted;
    rec.final_fraction = outcome.final_fraction;
    rec.disposed = outcome.disposed;
    rec.value = outcome.value;
    rec.audit_ran = outcome.audit.ran;
    if (outcome.audit.ran && !outcome.audit.all_pass()) {
      rec.audit_ok = false;
      rec.audit_failure = outcome.audit.first_failure();
      if (report.audits_all_ok) {
        report.audits_all_ok = false;
        report.first_audit_failure = rec.audit_failure;
      }
    }
    report.arrivals.push_back(std::move(rec));
  }

  report.observed_sparsity = state.observed_sparsity;
  report.final_kept = state.kept_set();
  report.f_kept = objective.evaluate(report.final_kept);

  if (compute_opt && instance.items.size() <= 30) {
    OptResult opt = brute_force_opt(instance.items, objective);
    report.opt_source = OptSource::kBruteForce;
    report.opt_value = opt.best_value;
    report.opt_set = opt.best_set;
  } else if (compute_opt && instance.witness) {
    report.opt_source = OptSource::kWitness;
    report.opt_value = instance.witness->value;
  }

  if (report.opt_source != OptSource::kNone) {
    if (report.f_kept.sign() > 0) {
      report.ratio_defined = true;
      report.ratio = report.opt_value / report.f_kept;
    } else if (report.opt_value.sign() == 0) {
      report.ratio_defined = true;
      report.ratio = Rational(1);
    } else {
      report.ratio_infinite = true;
    }
    report.bound_multiplier = competitive_bound_multiplier(params, report.observed_sparsity);
    report.bound = report.bound_multiplier * report.f_kept;
    report.bound_checked = true;
    report.bound_ok = report.opt_value <= report.bound;
  }
  return report;
}

json trial_to_json(const TrialReport& report) {
  json j;
  j["schema"] = "ovpack-trial-v1";
  j["meta"] = {{"generator", report.meta.generator},
               {"params", report.meta.params},
               {"seed", report.meta.seed}};
  j["algorithm"] = report.algorithm;
  j["epsilon"] = report.epsilon.str();
  j["n_items"] = report.n_items;
  j["k_observed"] = report.observed_sparsity;

  json arrivals = json::array();
  for (const ArrivalRecord& rec : report.arrivals) {
    json a;
    a["id"] = rec.id;
    a["accepted"] = rec.accepted;
    a["fraction"] = jrat(rec.final_fraction);
    a["value"] = jrat(rec.value);
    a["disposed"] = rec.disposed;
    if (rec.audit_ran) {
      a["audit_ok"] = rec.audit_ok;
      if (!rec.audit_ok) a["audit_failure"] = rec.audit_failure;
    }
    arrivals.push_back(std::move(a));
  }
  j["arrivals"] = std::move(arrivals);

  j["final"]["kept"] = report.final_kept;
  j["final"]["f_kept"] = jrat(report.f_kept);
  j["final"]["audits_all_ok"] = report.audits_all_ok;
  if (!report.audits_all_ok) j["final"]["first_audit_failure"] = report.first_audit_failure;

  switch (report.opt_source) {
    case OptSource::kNone:
      j["opt"]["source"] = "none";
      break;
    case OptSource::kBruteForce:
      j["opt"]["source"] = "brute-force";
      j["opt"]["value"] = jrat(report.opt_value);
      j["opt"]["set"] = report.opt_set;
      break;
    case OptSource::kWitness:
      j["opt"]["source"] = "witness";
      j["opt"]["value"] = jrat(report.opt_value);
      break;
  }
  if (report.ratio_defined) {
    j["ratio"] = jrat(report.ratio);
  } else if (report.ratio_infinite) {
    j["ratio"] = "inf";
  }
  if (report.bound_checked) {
    j["bound"]["multiplier"] = jrat(report.bound_multiplier);
    j["bound"]["value"] = jrat(report.bound);
    j["bound"]["ok"] = report.bound_ok;
  }
  return j;
}

std::string trial_csv_header() {
  return "seed,n_items,k_observed,f_S,opt,ratio,bound,bound_ok";
}

std::string trial_csv_row(const TrialReport& report) {
  std::ostringstream out;
  out << report.meta.seed << ',' << report.n_items << ',' << report.observed_sparsity << ','
      << report.f_kept.to_double() << ',';
  if (report.opt_source != OptSource::kNone) out << report.opt_value.to_double();
  out << ',';
  if (report.ratio_defined) {
    out << report.ratio.to_double();
  } else if (report.ratio_infinite) {
    out << "inf";
  }
  out << ',';
  if (report.bound_checked) {
    out << report.bound.to_double() << ',' << (report.bound_ok ? 1 : 0);
  } else {
    out << ',';
  }
  return out.str();
}

}  // namespace ovp
