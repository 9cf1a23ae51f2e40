#include "ovpack/engine.hpp"

#include <algorithm>

#include "ovpack/errors.hpp"

namespace ovp {
namespace {

// Working view of one dimension the newcomer uses during a phase.
struct DimTrack {
  Dim dim = 0;
  Rational newcomer_weight;          // > 0
  Rational load;                     // current fractional load
  std::vector<ItemId> contributors;  // kept items with weight here and x > 0, id-sorted
  bool saturated = false;            // load exactly at the margin
  bool pinned = false;               // saturated and held there by disposal
  ItemId argmin = 0;                 // cheapest contributor, valid when saturated
  Rational argmin_density;
  Rational drift;                    // d(load)/d(fraction) under current rates
};

// Solves a small dense linear system exactly; used for the balancing
// disposal speeds. Returns false when singular.
bool solve_exact(std::vector<std::vector<Rational>>& a, std::vector<Rational>& rhs,
                 std::vector<Rational>& out) {
  const size_t n = rhs.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      const Rational factor = a[row][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[row][c] -= factor * a[col][c];
      rhs[row] -= factor * rhs[col];
    }
  }
  out.resize(n);
  for (size_t i = 0; i < n; ++i) out[i] = rhs[i] / a[i][i];
  return true;
}

class PhaseSimulator {
 public:
  PhaseSimulator(const FractionalState& state, const Item& item,
                 const Rational& item_value, const AlgorithmParams& params)
      : state_(state), item_(item), value_(item_value), params_(params) {}

  PhaseTrace run();

 private:
  Rational weight_of(ItemId id, Dim dim) const {
    return state_.items.at(id).weights.weight(dim);
  }

  void find_argmin(DimTrack& dt) const;
  void solve_rates();
  void restructure(bool initial);
  void finish(StopReason reason, PhaseEventKind kind);

  const FractionalState& state_;
  const Item& item_;
  const Rational& value_;
  const AlgorithmParams& params_;

  Rational fraction_;                   // the newcomer's fraction == phase clock
  std::map<ItemId, Rational> x_;        // fractions of kept items, positive entries only
  std::vector<DimTrack> dims_;
  std::map<ItemId, Rational> speeds_;   // positive disposal speeds, -dx/dtheta
  Rational loss_;                       // stop-condition sum over saturated dims
  PhaseTrace trace_;
};

void PhaseSimulator::find_argmin(DimTrack& dt) const {
  // Cheapest contributor; contributors are id-sorted, so keeping the first
  // strict minimum resolves ties toward the smallest id.
  if (dt.contributors.empty()) {
    // Only reachable if the newcomer alone saturates a dimension before the
    // fraction cap, which the slack guarantee rules out.
    throw InternalError("phase: saturated dimension has no disposable item");
  }
  bool first = true;
  for (ItemId v : dt.contributors) {
    const Rational density = state_.value_at_arrival.at(v) / weight_of(v, dt.dim);
    if (first || density < dt.argmin_density) {
      dt.argmin = v;
      dt.argmin_density = density;
      first = false;
    }
  }
}

// Chooses which saturated dimensions stay pinned at the margin and the
// disposal speeds that hold them there. A pinned dimension's load must not
// move; its argmin is pushed down exactly fast enough, which can be slower
// than the naive weight ratio when other disposals already relieve the
// dimension. Dimensions whose balance would need a negative speed are
// over-relieved: they leave the margin on their own and stop enforcing.
void PhaseSimulator::solve_rates() {
  const size_t budget = 16 + 4 * (dims_.size() + 2) * (dims_.size() + 2);
  for (DimTrack& dt : dims_) dt.pinned = dt.saturated;

  for (size_t round = 0;; ++round) {
    if (round > budget) throw InternalError("phase: disposal balance did not stabilize");

    // An item can hold only one dimension; when it is the argmin of
    // several pinned ones, keep the dimension with the steepest naive
    // ratio (ties toward the smaller index) and let the others go.
    std::map<ItemId, size_t> holder;
    bool changed = false;
    for (size_t d = 0; d < dims_.size(); ++d) {
      DimTrack& dt = dims_[d];
      if (!dt.pinned) continue;
      auto [it, fresh] = holder.try_emplace(dt.argmin, d);
      if (fresh) continue;
      DimTrack& other = dims_[it->second];
      const Rational mine = dt.newcomer_weight / weight_of(dt.argmin, dt.dim);
      const Rational theirs = other.newcomer_weight / weight_of(dt.argmin, other.dim);
      if (mine > theirs) {
        other.pinned = false;
        it->second = d;
      } else {
        dt.pinned = false;
      }
      changed = true;
    }

    // Balance the pinned dimensions exactly: one unknown speed per holding
    // item, one zero-drift equation per pinned dimension.
    std::vector<ItemId> unknowns;
    for (const auto& [id, d] : holder) {
      (void)d;
      unknowns.push_back(id);
    }
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> rhs;
    for (const auto& [id, d] : holder) {
      (void)id;
      const DimTrack& dt = dims_[d];
      std::vector<Rational> row;
      row.reserve(unknowns.size());
      for (ItemId v : unknowns) row.push_back(weight_of(v, dt.dim));
      matrix.push_back(std::move(row));
      rhs.push_back(dt.newcomer_weight);
    }
    std::vector<Rational> solved;
    if (!matrix.empty() && !solve_exact(matrix, rhs, solved)) {
      throw InternalError("phase: singular disposal balance");
    }

    speeds_.clear();
    for (size_t i = 0; i < unknowns.size(); ++i) {
      if (solved[i].sign() < 0) {
        // Even zero disposal leaves this dimension falling; it stops
        // enforcing and its load drops off the margin.
        dims_[holder.at(unknowns[i])].pinned = false;
        changed = true;
      }
    }
    if (changed) {
      speeds_.clear();
      continue;
    }
    for (size_t i = 0; i < unknowns.size(); ++i) {
      if (solved[i].sign() > 0) speeds_[unknowns[i]] = solved[i];
    }

    // Drifts under the solved speeds.
    for (DimTrack& dt : dims_) {
      dt.drift = dt.newcomer_weight;
      for (const auto& [id, speed] : speeds_) {
        const Rational w = weight_of(id, dt.dim);
        if (!w.is_zero()) dt.drift -= speed * w;
      }
    }

    // A saturated dimension left unpinned must genuinely fall; if its load
    // would rise, it has to enforce after all (taking its argmin back from
    // any weaker dimension).
    bool repinned = false;
    for (DimTrack& dt : dims_) {
      if (!dt.saturated || dt.pinned || dt.drift.sign() <= 0) continue;
      dt.pinned = true;
      auto it = holder.find(dt.argmin);
      if (it != holder.end()) dims_[it->second].pinned = false;
      repinned = true;
      break;
    }
    if (repinned) continue;

    for (const DimTrack& dt : dims_) {
      if (dt.pinned && dt.drift.sign() != 0) {
        throw InternalError("phase: pinned dimension drifting");
      }
      if (dt.saturated && dt.drift.sign() > 0) {
        throw InternalError("phase: saturated dimension rising");
      }
    }
    return;
  }
}

void PhaseSimulator::restructure(bool initial) {
  struct PrevDim {
    bool pinned;
    ItemId argmin;
  };
  std::vector<PrevDim> prev;
  prev.reserve(dims_.size());
  for (const DimTrack& dt : dims_) prev.push_back({dt.pinned, dt.argmin});

  for (DimTrack& dt : dims_) {
    dt.saturated = dt.load == params_.capacity_margin;
    dt.pinned = false;
    if (dt.saturated) find_argmin(dt);
  }
  solve_rates();

  // The stop condition charges every saturated dimension, pinned or not:
  // at this instant their loads sit exactly at the margin.
  loss_ = Rational();
  for (const DimTrack& dt : dims_) {
    if (dt.saturated) loss_ += dt.newcomer_weight * dt.argmin_density;
  }

  if (initial) return;
  for (size_t i = 0; i < dims_.size(); ++i) {
    const DimTrack& dt = dims_[i];
    if (dt.pinned && !prev[i].pinned) {
      trace_.events.push_back({fraction_, PhaseEventKind::kDimSaturated, dt.dim, 0, 0});
    } else if (!dt.pinned && prev[i].pinned) {
      trace_.events.push_back({fraction_, PhaseEventKind::kDimUnsaturated, dt.dim, 0, 0});
    } else if (dt.pinned && prev[i].pinned && dt.argmin != prev[i].argmin) {
      trace_.events.push_back(
          {fraction_, PhaseEventKind::kArgminChanged, dt.dim, dt.argmin, prev[i].argmin});
    }
  }
}

void PhaseSimulator::finish(StopReason reason, PhaseEventKind kind) {
  trace_.events.push_back({fraction_, kind, 0, 0, 0});
  trace_.stop_reason = reason;
  trace_.final_fraction = fraction_;
  trace_.x_final = x_;
  trace_.x_final[item_.id] = fraction_;
}

PhaseTrace PhaseSimulator::run() {
  for (const auto& [id, f] : state_.held) {
    if (f.sign() > 0) x_.emplace(id, f);
  }
  for (const auto& [dim, w] : item_.weights.entries()) {
    DimTrack dt;
    dt.dim = dim;
    dt.newcomer_weight = w;
    if (auto it = state_.load.find(dim); it != state_.load.end()) dt.load = it->second;
    for (const auto& [id, f] : x_) {
      (void)f;
      if (state_.items.at(id).weights.has(dim)) dt.contributors.push_back(id);
    }
    dims_.push_back(std::move(dt));
  }
  restructure(/*initial=*/true);

  const Rational one(1);
  const Rational gain_rate = params_.loss_tolerance * value_;
  const size_t guard_limit = 10000 + 100 * (x_.size() + 1) * (dims_.size() + 1);
  size_t guard = 0;
  for (;;) {
    if (++guard > guard_limit) throw InternalError("phase: event budget exhausted");

    // Strict while-condition: continue only if the loss rate is below the
    // tolerated share of the newcomer's value. Re-checked after every event.
    if (!(gain_rate > loss_)) {
      finish(StopReason::kStopConditionMet, PhaseEventKind::kStopConditionMet);
      return std::move(trace_);
    }

    // Earliest of: the fraction cap, a decreasing fraction reaching zero,
    // an unsaturated load reaching the margin. All affine, so exact.
    Rational step = one - fraction_;
    for (const auto& [id, speed] : speeds_) {
      step = min(step, x_.at(id) / speed);
    }
    for (const DimTrack& dt : dims_) {
      if (!dt.saturated && dt.drift.sign() > 0) {
        step = min(step, (params_.capacity_margin - dt.load) / dt.drift);
      }
    }
    if (step.sign() <= 0) throw InternalError("phase: no forward progress");

    fraction_ += step;
    for (const auto& [id, speed] : speeds_) {
      x_.at(id) -= speed * step;
    }
    for (DimTrack& dt : dims_) {
      if (dt.drift.sign() != 0) dt.load += dt.drift * step;
      if (dt.load > params_.capacity_margin) {
        throw InternalError("phase: load exceeded the capacity margin");
      }
    }

    // Zeroed fractions leave the pool first, before any argmin query.
    std::vector<ItemId> dead;
    for (const auto& [id, speed] : speeds_) {
      (void)speed;
      const Rational& xv = x_.at(id);
      if (xv.sign() < 0) throw InternalError("phase: fraction went negative");
      if (xv.is_zero()) dead.push_back(id);
    }
    for (ItemId id : dead) {
      trace_.events.push_back({fraction_, PhaseEventKind::kItemFractionHitZero, 0, id, 0});
      x_.erase(id);
      for (DimTrack& dt : dims_) {
        auto it = std::find(dt.contributors.begin(), dt.contributors.end(), id);
        if (it != dt.contributors.end()) dt.contributors.erase(it);
      }
    }

    if (fraction_ == one) {
      finish(StopReason::kFractionCapReached, PhaseEventKind::kFractionCapReached);
      return std::move(trace_);
    }
    restructure(/*initial=*/false);
  }
}

}  // namespace

PhaseTrace run_phase(const FractionalState& state, const Item& item,
                     const Rational& item_value, const AlgorithmParams& params) {
  if (item_value.sign() < 0) throw ParamError("run_phase: negative item value");
  return PhaseSimulator(state, item, item_value, params).run();
}

StepOutcome observe_item(FractionalState& state, const Item& item,
                         const Objective& objective, const AlgorithmParams& params,
                         bool with_audit) {
  if (state.items.count(item.id) != 0) {
    throw ProtocolError("observe_item: duplicate arrival id " + std::to_string(item.id));
  }
  if (!state.items.empty() && item.id <= state.items.rbegin()->first) {
    throw ProtocolError("observe_item: arrival ids must be strictly increasing");
  }
  if (item.weights.dim_count() != state.dim_count) {
    throw ProtocolError("observe_item: mismatched dimension count");
  }
  if (item.weights.max_weight() > params.capacity_margin) {
    throw ProtocolError("observe_item: weight exceeds the declared slack");
  }

  const Rational value = objective.marginal(state.ever_set(), item.id);
  state.items.emplace(item.id, item);
  state.value_at_arrival[item.id] = value;
  state.observed_sparsity = std::max(state.observed_sparsity, item.weights.sparsity());

  StepOutcome out;
  out.value = value;
  out.trace = run_phase(state, item, value, params);
  out.final_fraction = out.trace.final_fraction;
  out.accepted = out.final_fraction >= params.commit_threshold;

  if (out.accepted) {
    const std::set<ItemId> previously_kept = state.kept_set();
    state.held.clear();
    for (const auto& [id, f] : out.trace.x_final) {
      if (f.sign() > 0) state.held.emplace(id, f);
    }
    state.ever_accepted[item.id] = out.final_fraction;
    // Dispose of small fractions.
    for (auto it = state.held.begin(); it != state.held.end();) {
      if (it->second < params.capacity_margin) {
        it = state.held.erase(it);
      } else {
        ++it;
      }
    }
    state.recompute_loads();
    for (ItemId id : previously_kept) {
      if (state.held.count(id) == 0) out.disposed.push_back(id);
    }
  }

  if (with_audit) out.audit = audit_state(state, objective, params);
  return out;
}

InvariantAudit audit_state(const FractionalState& state, const Objective& objective,
                           const AlgorithmParams& params) {
  InvariantAudit audit;
  audit.ran = true;
  const Rational one(1);
  const std::set<ItemId> kept = state.kept_set();
  const std::set<ItemId> ever = state.ever_set();

  // (1) fractional load within the margin, recomputed from scratch.
  {
    CheckResult c{"load_within_margin", true, ""};
    std::map<Dim, Rational> load;
    for (const auto& [id, f] : state.held) {
      for (const auto& [dim, w] : state.items.at(id).weights.entries()) load[dim] += f * w;
    }
    for (const auto& [dim, l] : load) {
      if (l > params.capacity_margin) {
        c.pass = false;
        c.detail = "dimension " + std::to_string(dim);
        break;
      }
    }
    audit.checks.push_back(std::move(c));
  }

  // (2) integral load of the kept set within capacity.
  {
    CheckResult c{"kept_load_within_capacity", true, ""};
    std::map<Dim, Rational> load;
    for (ItemId id : kept) {
      for (const auto& [dim, w] : state.items.at(id).weights.entries()) load[dim] += w;
    }
    for (const auto& [dim, l] : load) {
      if (l > one) {
        c.pass = false;
        c.detail = "dimension " + std::to_string(dim);
        break;
      }
    }
    audit.checks.push_back(std::move(c));
  }

  // (3) fraction ranges: held in {0} ∪ [margin, 1], peaks in {0} ∪ [threshold, 1],
  //     and peaks dominate held fractions.
  {
    CheckResult c{"fraction_ranges", true, ""};
    for (const auto& [id, f] : state.held) {
      if (f.sign() == 0) continue;
      if (f < params.capacity_margin || f > one) {
        c.pass = false;
        c.detail = "held fraction of item " + std::to_string(id);
        break;
      }
      auto a = state.ever_accepted.find(id);
      if (a == state.ever_accepted.end() || a->second < f) {
        c.pass = false;
        c.detail = "peak below held fraction for item " + std::to_string(id);
        break;
      }
    }
    if (c.pass) {
      for (const auto& [id, a] : state.ever_accepted) {
        if (a.sign() == 0) continue;
        if (a < params.commit_threshold || a > one) {
          c.pass = false;
          c.detail = "peak fraction of item " + std::to_string(id);
          break;
        }
      }
    }
    audit.checks.push_back(std::move(c));
  }

  // (4) value accounting: f(A) equals f(∅) plus the frozen values; the kept
  //     set's utility dominates its frozen-value sum.
  {
    Rational sum_ever, sum_kept;
    for (ItemId id : ever) sum_ever += state.value_at_arrival.at(id);
    for (ItemId id : kept) sum_kept += state.value_at_arrival.at(id);
    CheckResult ca{"value_accounting_ever", true, ""};
    if (objective.evaluate(ever) != state.f_empty + sum_ever) {
      ca.pass = false;
      ca.detail = "f(A) != f_empty + sum of frozen values";
    }
    audit.checks.push_back(std::move(ca));
    CheckResult cs{"value_accounting_kept", true, ""};
    if (objective.evaluate(kept) < state.f_empty + sum_kept) {
      cs.pass = false;
      cs.detail = "f(S) below f_empty + sum of frozen values";
    }
    audit.checks.push_back(std::move(cs));
  }

  // (5) the stronger per-round value invariant:
  //     v(held) >= (1 - gamma - beta/alpha) * sum over A\S of v*peak
  //              + (1 - gamma) * sum over S of v*peak.
  {
    CheckResult c{"strong_value_invariant", true, ""};
    Rational v_held, dropped_term, kept_term;
    for (const auto& [id, f] : state.held) v_held += state.value_at_arrival.at(id) * f;
    for (const auto& [id, a] : state.ever_accepted) {
      if (a.sign() == 0) continue;
      const Rational term = state.value_at_arrival.at(id) * a;
      if (kept.count(id) != 0) {
        kept_term += term;
      } else {
        dropped_term += term;
      }
    }
    const Rational coeff_dropped =
        one - params.loss_tolerance - params.capacity_margin / params.commit_threshold;
    const Rational coeff_kept = one - params.loss_tolerance;
    if (v_held < coeff_dropped * dropped_term + coeff_kept * kept_term) {
      c.pass = false;
      c.detail = "held value below the invariant combination";
    }
    audit.checks.push_back(std::move(c));
  }

  // (6) peak-weighted values within twice the kept value.
  {
    CheckResult c{"peak_value_bound", true, ""};
    Rational peak_sum, kept_value;
    for (const auto& [id, a] : state.ever_accepted) {
      peak_sum += state.value_at_arrival.at(id) * a;
    }
    for (ItemId id : kept) kept_value += state.value_at_arrival.at(id);
    if (peak_sum > Rational(2) * kept_value) {
      c.pass = false;
      c.detail = "peak-weighted value exceeds twice the kept value";
    }
    audit.checks.push_back(std::move(c));
  }

  return audit;
}

}  // namespace ovp
