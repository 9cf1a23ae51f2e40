#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovpack/engine.hpp"
#include "ovpack/generators.hpp"
#include "ovpack/params.hpp"

namespace ovp {

enum class OptSource { kNone, kBruteForce, kWitness };

struct ArrivalRecord {
  ItemId id = 0;
  bool accepted = false;
  Rational final_fraction;
  std::vector<ItemId> disposed;
  Rational value;
  bool audit_ran = false;
  bool audit_ok = true;
  std::string audit_failure;
};

// Everything one run produces: per-arrival outcomes, the final solution,
// the reference optimum and the competitive-bound verdict.
struct TrialReport {
  InstanceMeta meta;
  std::string algorithm = "engine";
  Rational epsilon;  // slack the engine ran with
  size_t n_items = 0;
  size_t observed_sparsity = 0;

  std::vector<ArrivalRecord> arrivals;
  std::set<ItemId> final_kept;
  Rational f_kept;

  OptSource opt_source = OptSource::kNone;
  Rational opt_value;
  std::set<ItemId> opt_set;  // brute force only

  // opt / f(S); 1 when both are zero; infinite when only f(S) is zero.
  bool ratio_defined = false;
  bool ratio_infinite = false;
  Rational ratio;

  // Explicit competitive bound: opt <= multiplier * f(S) with
  // multiplier = 2/alpha + 2k/(gamma*beta*(1-alpha)), k observed sparsity.
  Rational bound_multiplier;
  Rational bound;  // multiplier * f(S)
  bool bound_checked = false;
  bool bound_ok = true;

  bool audits_all_ok = true;
  std::string first_audit_failure;
};

// The multiplier of the explicit competitive bound at these parameters.
Rational competitive_bound_multiplier(const AlgorithmParams& params, size_t sparsity);

// Tightest slack the instance admits: 1 - max weight. Throws ParamError
// when some weight is 1 (no slack at all).
Rational default_epsilon(const Instance& instance);

// Feeds the instance through the engine in arrival order, auditing after
// every arrival, then computes the reference optimum: exhaustively when
// at most 30 items, else from the instance witness when present.
// compute_opt=false skips the optimum (and with it the bound check) for
// audit-only corpora where the exhaustive search would dominate.
TrialReport run_trial(const Instance& instance, const Rational& epsilon,
                      bool with_audit = true, bool compute_opt = true);

nlohmann::json trial_to_json(const TrialReport& report);
std::string trial_csv_header();
std::string trial_csv_row(const TrialReport& report);

}  // namespace ovp
