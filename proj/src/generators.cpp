#include "ovpack/generators.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "ovpack/errors.hpp"
#include "ovpack/offline.hpp"

namespace ovp {
namespace {

SparseWeightVector uniform_weights(const std::vector<Dim>& dims, const Rational& w,
                                   Dim dim_count) {
  std::vector<std::pair<Dim, Rational>> entries;
  entries.reserve(dims.size());
  for (Dim dim : dims) entries.emplace_back(dim, w);
  return SparseWeightVector(std::move(entries), dim_count);
}

void require_witness(const Instance& inst) {
  if (!inst.witness) throw InternalError("sampler: missing witness");
  if (!verify_claimed_opt(inst.items, inst.objective(), inst.witness->ids,
                          inst.witness->value)) {
    throw InternalError("sampler: witness failed verification for " + inst.meta.generator);
  }
}

// ---------------------------------------------------------------------------
// Big item + per-dimension small items; stops once the big item is gone.

class SlackDeterministicAdversary final : public AdaptiveAdversary {
 public:
  SlackDeterministicAdversary(int k, const Rational& epsilon) : k_(k), epsilon_(epsilon) {
    if (k < 1) throw ParamError("slack-deterministic adversary: k must be >= 1");
    if (epsilon <= Rational(0) || epsilon >= Rational(1, 2)) {
      throw ParamError("slack-deterministic adversary: epsilon must lie in (0, 1/2)");
    }
    small_value_ = sqrt_upper(epsilon_ / Rational(k_), Rational(1, 1000000000000L));
    // floor(1 / (2 epsilon)) small items per dimension
    const Rational inv = Rational(1) / (Rational(2) * epsilon_);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), inv.num().get_mpz_t(), inv.den().get_mpz_t());
    per_dim_ = q.get_ui();
  }

  Dim dims() const override { return static_cast<Dim>(k_); }
  Objective::Kind objective_kind() const override { return Objective::Kind::kModular; }
  const std::vector<Item>& emitted() const override { return emitted_; }

  std::optional<Item> next_item(const std::set<ItemId>& committed) override {
    if (stopped_) return std::nullopt;
    if (emitted_.empty()) {
      std::vector<Dim> all(static_cast<size_t>(k_));
      for (int i = 0; i < k_; ++i) all[static_cast<size_t>(i)] = static_cast<Dim>(i);
      Item big;
      big.id = 0;
      big.weights = uniform_weights(all, Rational(1) - epsilon_, dims());
      big.value = Rational(1);
      emitted_.push_back(big);
      return big;
    }
    if (committed.count(0) == 0) {  // big item rejected or disposed of
      stopped_ = true;
      return std::nullopt;
    }
    const uint64_t small_index = emitted_.size() - 1;
    if (small_index >= per_dim_ * static_cast<uint64_t>(k_)) {
      stopped_ = true;
      return std::nullopt;
    }
    Item small;
    small.id = static_cast<ItemId>(emitted_.size());
    const Dim dim = static_cast<Dim>(small_index / per_dim_);
    small.weights = uniform_weights({dim}, Rational(2) * epsilon_, dims());
    small.value = small_value_;
    emitted_.push_back(small);
    return small;
  }

  Witness witness() const override {
    Witness w;
    const Rational small_total =
        Rational(static_cast<long>(emitted_.size()) - 1) * small_value_;
    if (emitted_.size() > 1 && small_total > Rational(1)) {
      for (size_t i = 1; i < emitted_.size(); ++i) w.ids.insert(emitted_[i].id);
      w.value = small_total;
    } else if (!emitted_.empty()) {
      w.ids.insert(0);
      w.value = Rational(1);
    }
    return w;
  }

 private:
  int k_;
  Rational epsilon_;
  Rational small_value_;
  uint64_t per_dim_ = 0;
  std::vector<Item> emitted_;
  bool stopped_ = false;
};

// ---------------------------------------------------------------------------
// Adaptive k-subsets over d = 2k^2 dimensions.

class SlackSubsetsAdversary final : public AdaptiveAdversary {
 public:
  SlackSubsetsAdversary(int k, const Rational& epsilon) : k_(k), epsilon_(epsilon) {
    if (k < 2) throw ParamError("slack-subsets adversary: k must be >= 2");
    if (epsilon <= Rational(0) || epsilon >= Rational(1, 2)) {
      throw ParamError("slack-subsets adversary: epsilon must lie in (0, 1/2)");
    }
    d_ = static_cast<Dim>(2 * k * k);
  }

  Dim dims() const override { return d_; }
  Objective::Kind objective_kind() const override { return Objective::Kind::kCardinality; }
  const std::vector<Item>& emitted() const override { return emitted_; }

  std::optional<Item> next_item(const std::set<ItemId>& committed) override {
    if (stopped_) return std::nullopt;
    if (emitted_.empty()) {
      std::vector<Dim> first(static_cast<size_t>(k_));
      for (int i = 0; i < k_; ++i) first[static_cast<size_t>(i)] = static_cast<Dim>(i);
      next_fresh_ = static_cast<Dim>(k_);
      return emit(first);
    }
    if (emitted_.size() >= 2 * static_cast<size_t>(k_)) {
      stopped_ = true;
      return std::nullopt;
    }
    if (!committed.empty()) {
      last_kept_ = *committed.rbegin();  // most recent arrival among kept
    }
    if (!last_kept_) {  // nothing was ever kept beyond rejecting the opener
      stopped_ = true;
      return std::nullopt;
    }
    const std::vector<Dim>& kept_dims = dims_of_[*last_kept_];
    std::optional<Dim> shared;
    for (Dim i : kept_dims) {
      if (users_.at(i).size() == 1) {
        shared = i;
        break;
      }
    }
    if (!shared) {  // every dimension of the kept item is already contested
      stopped_ = true;
      exhausted_at_ = *last_kept_;
      return std::nullopt;
    }
    std::vector<Dim> picked;
    picked.reserve(static_cast<size_t>(k_));
    for (int f = 0; f < k_ - 1; ++f) {
      if (next_fresh_ >= d_) throw InternalError("slack-subsets adversary: out of dimensions");
      picked.push_back(next_fresh_++);
    }
    picked.push_back(*shared);
    std::sort(picked.begin(), picked.end());
    return emit(picked);
  }

  Witness witness() const override {
    std::vector<ItemId> chosen;
    if (exhausted_at_) {
      // Each dimension of the stuck kept item is contested by exactly one
      // other arrival; those contenders are mutually non-conflicting.
      for (Dim i : dims_of_.at(*exhausted_at_)) {
        for (ItemId user : users_.at(i)) {
          if (user != *exhausted_at_) chosen.push_back(user);
        }
      }
    } else {
      // Reverse scan: keep an item unless it conflicts with one already kept.
      for (size_t idx = emitted_.size(); idx-- > 0;) {
        const ItemId id = static_cast<ItemId>(idx);
        bool clash = false;
        for (ItemId c : chosen) {
          if (conflicting(id, c)) {
            clash = true;
            break;
          }
        }
        if (!clash) chosen.push_back(id);
      }
    }
    for (size_t a = 0; a < chosen.size(); ++a) {
      for (size_t b = a + 1; b < chosen.size(); ++b) {
        if (conflicting(chosen[a], chosen[b])) {
          throw InternalError("slack-subsets adversary: witness items conflict");
        }
      }
    }
    Witness w;
    w.ids.insert(chosen.begin(), chosen.end());
    w.value = Rational(static_cast<long>(w.ids.size()));
    return w;
  }

 private:
  Item emit(const std::vector<Dim>& picked) {
    Item item;
    item.id = static_cast<ItemId>(emitted_.size());
    item.weights = uniform_weights(picked, Rational(1) - epsilon_, d_);
    dims_of_[item.id] = picked;
    for (Dim i : picked) users_[i].push_back(item.id);
    emitted_.push_back(item);
    return item;
  }

  bool conflicting(ItemId a, ItemId b) const {
    const auto& da = dims_of_.at(a);
    const auto& db = dims_of_.at(b);
    std::vector<Dim> shared;
    std::set_intersection(da.begin(), da.end(), db.begin(), db.end(),
                          std::back_inserter(shared));
    return !shared.empty();
  }

  int k_;
  Rational epsilon_;
  Dim d_ = 0;
  Dim next_fresh_ = 0;
  std::vector<Item> emitted_;
  std::map<ItemId, std::vector<Dim>> dims_of_;
  std::map<Dim, std::vector<ItemId>> users_;
  std::optional<ItemId> last_kept_;
  std::optional<ItemId> exhausted_at_;
  bool stopped_ = false;
};

int exact_log2(int v) {
  if (v < 1 || (v & (v - 1)) != 0) throw ParamError("parameter must be a power of two");
  return std::countr_zero(static_cast<unsigned>(v));
}

}  // namespace

std::unique_ptr<AdaptiveAdversary> adversary_slack_deterministic(int k,
                                                                 const Rational& epsilon) {
  return std::make_unique<SlackDeterministicAdversary>(k, epsilon);
}

std::unique_ptr<AdaptiveAdversary> adversary_slack_subsets(int k, const Rational& epsilon) {
  return std::make_unique<SlackSubsetsAdversary>(k, epsilon);
}

SlackRandomSample sample_slack_random(int ell, const Rational& epsilon, uint64_t seed,
                                      bool shuffle_within_phase) {
  if (ell < 4) throw ParamError("slack-random: ell must be a power of two >= 4");
  const int log2l = exact_log2(ell);
  if (epsilon <= Rational(0) || epsilon >= Rational(1, 2)) {
    throw ParamError("slack-random: epsilon must lie in (0, 1/2)");
  }
  const long k = 100L * ell * log2l + 1;
  const long d = ell + 400L * ell * ell * log2l;
  const Rational weight = Rational(1) - epsilon;

  SlackRandomSample out;
  Instance& inst = out.instance;
  inst.dims = static_cast<Dim>(d);
  inst.objective_kind = Objective::Kind::kCardinality;
  inst.meta = {"slack-random",
               "ell=" + std::to_string(ell) + ",epsilon=" + epsilon.str() +
                   (shuffle_within_phase ? ",shuffled" : ""),
               seed};

  Rng rng(seed);
  std::vector<Dim> pool;  // J_i
  pool.reserve(static_cast<size_t>(d - ell));
  for (long j = ell; j < d; ++j) pool.push_back(static_cast<Dim>(j));

  ItemId next_id = 0;
  for (int phase = 1; phase <= ell; ++phase) {
    const long blocks = 4L * ell - phase + 1;
    const size_t block_size = static_cast<size_t>(k - 1);
    if (pool.size() != static_cast<size_t>(blocks) * block_size) {
      throw InternalError("slack-random: pool size drifted");
    }
    rng.shuffle(pool);
    const long good_block = static_cast<long>(rng.below(static_cast<uint64_t>(blocks)));

    std::vector<long> order(static_cast<size_t>(blocks));
    for (long j = 0; j < blocks; ++j) order[static_cast<size_t>(j)] = j;
    if (shuffle_within_phase) rng.shuffle(order);

    std::vector<ItemId> phase_ids;
    for (long pos = 0; pos < blocks; ++pos) {
      const long block = order[static_cast<size_t>(pos)];
      std::vector<Dim> dims;
      dims.reserve(block_size + 1);
      dims.push_back(static_cast<Dim>(phase - 1));
      const size_t begin = static_cast<size_t>(block) * block_size;
      dims.insert(dims.end(), pool.begin() + static_cast<long>(begin),
                  pool.begin() + static_cast<long>(begin + block_size));
      std::sort(dims.begin(), dims.end());

      Item item;
      item.id = next_id++;
      item.weights = uniform_weights(dims, weight, inst.dims);
      if (block == good_block) out.good.push_back(item.id);
      phase_ids.push_back(item.id);
      inst.items.push_back(std::move(item));
    }
    out.phases.push_back(std::move(phase_ids));

    std::vector<Dim> next_pool;
    next_pool.reserve(pool.size() - block_size);
    for (long block = 0; block < blocks; ++block) {
      if (block == good_block) continue;
      const size_t begin = static_cast<size_t>(block) * block_size;
      next_pool.insert(next_pool.end(), pool.begin() + static_cast<long>(begin),
                       pool.begin() + static_cast<long>(begin + block_size));
    }
    pool = std::move(next_pool);
  }

  Witness w;
  w.ids.insert(out.good.begin(), out.good.end());
  w.value = Rational(static_cast<long>(ell));
  inst.witness = std::move(w);
  require_witness(inst);
  return out;
}

NoSlackSample sample_noslack(int d, uint64_t seed) {
  if (d < 2 || d > 16) throw ParamError("noslack: d must lie in [2, 16]");
  NoSlackSample out;
  out.delta = Rational::pow2(-2 * d);

  Rng rng(seed);
  out.sigma.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) out.sigma[static_cast<size_t>(i)] = static_cast<Dim>(i);
  rng.shuffle(out.sigma);
  std::vector<int> position(static_cast<size_t>(d));  // dim -> index in sigma
  for (int m = 0; m < d; ++m) position[out.sigma[static_cast<size_t>(m)]] = m;

  Instance& inst = out.instance;
  inst.dims = static_cast<Dim>(d);
  inst.objective_kind = Objective::Kind::kCardinality;
  inst.meta = {"noslack", "d=" + std::to_string(d), seed};

  ItemId next_id = 0;
  std::vector<ItemId> leaders;
  for (int t = 1; t <= d; ++t) {
    const Rational small = Rational::pow2(t) * out.delta;
    const Rational big = Rational(1) - (Rational::pow2(t) - Rational(1)) * out.delta;
    struct Pending {
      int j;
      Item item;
    };
    std::vector<Pending> phase;
    for (int j = 1; j <= d + 1 - t; ++j) {
      const Dim big_dim = out.sigma[static_cast<size_t>(t + j - 2)];
      std::vector<std::pair<Dim, Rational>> entries;
      for (int dim = 0; dim < d; ++dim) {
        if (position[static_cast<size_t>(dim)] <= t - 2) continue;  // zeroed coordinates
        entries.emplace_back(static_cast<Dim>(dim),
                             static_cast<Dim>(dim) == big_dim ? big : small);
      }
      Pending p;
      p.j = j;
      p.item.weights = SparseWeightVector(std::move(entries), inst.dims);
      phase.push_back(std::move(p));
    }
    // Within a phase, items arrive in ascending lexicographic order of
    // their weight vectors.
    std::sort(phase.begin(), phase.end(), [](const Pending& a, const Pending& b) {
      return SparseWeightVector::lex_less(a.item.weights, b.item.weights);
    });
    out.ids_by_phase.emplace_back(static_cast<size_t>(d + 1 - t));
    for (Pending& p : phase) {
      p.item.id = next_id++;
      out.ids_by_phase.back()[static_cast<size_t>(p.j - 1)] = p.item.id;
      if (p.j == 1) leaders.push_back(p.item.id);
      inst.items.push_back(std::move(p.item));
    }
  }

  Witness w;
  w.ids.insert(leaders.begin(), leaders.end());
  w.value = Rational(d);
  inst.witness = std::move(w);
  require_witness(inst);
  return out;
}

SmallWeightSample sample_smallweight(int ell, const Rational& epsilon_w, uint64_t seed) {
  if (ell < 2 || ell > 5) throw ParamError("smallweight: ell must lie in [2, 5]");
  if (epsilon_w.sign() <= 0 || epsilon_w > Rational(1) || epsilon_w.num() != 1) {
    throw ParamError("smallweight: 1/epsilon_w must be a positive integer");
  }
  const long copies = epsilon_w.den().get_si();

  // b[i] = (2*ell - i + 1)! / ell!, defined for i = 1..ell+1.
  std::vector<long> b(static_cast<size_t>(ell) + 2, 1);
  for (int i = 1; i <= ell + 1; ++i) {
    long prod = 1;
    for (long f = ell + 1; f <= 2L * ell - i + 1; ++f) prod *= f;
    b[static_cast<size_t>(i)] = prod;
  }
  const long d = b[1] + ell;

  SmallWeightSample out;
  Instance& inst = out.instance;
  inst.dims = static_cast<Dim>(d);
  inst.objective_kind = Objective::Kind::kCardinality;
  inst.meta = {"smallweight",
               "ell=" + std::to_string(ell) + ",epsilon_w=" + epsilon_w.str(), seed};

  Rng rng(seed);
  std::vector<Dim> pool;  // J_i, kept sorted; blocks are sorted-order slices
  pool.reserve(static_cast<size_t>(b[1]));
  for (long j = ell; j < d; ++j) pool.push_back(static_cast<Dim>(j));

  ItemId next_id = 0;
  Witness w;
  for (int phase = 1; phase <= ell; ++phase) {
    const long types = 2L * ell - phase + 1;
    const size_t block_size = static_cast<size_t>(b[static_cast<size_t>(phase) + 1]);
    if (pool.size() != static_cast<size_t>(types) * block_size) {
      throw InternalError("smallweight: pool size drifted");
    }
    out.phase_pool.push_back(pool);
    const long chosen = static_cast<long>(rng.below(static_cast<uint64_t>(types)));
    out.chosen_type.push_back(static_cast<int>(chosen));

    std::vector<std::vector<ItemId>> type_copies;
    for (long type = 0; type < types; ++type) {
      const size_t begin = static_cast<size_t>(type) * block_size;
      std::vector<Dim> dims;
      dims.reserve(pool.size() - block_size + 1);
      dims.push_back(static_cast<Dim>(phase - 1));
      for (size_t p = 0; p < pool.size(); ++p) {
        if (p < begin || p >= begin + block_size) dims.push_back(pool[p]);
      }
      std::sort(dims.begin(), dims.end());

      std::vector<ItemId> ids;
      for (long copy = 0; copy < copies; ++copy) {
        Item item;
        item.id = next_id++;
        item.weights = uniform_weights(dims, epsilon_w, inst.dims);
        ids.push_back(item.id);
        if (type == chosen) w.ids.insert(item.id);
        inst.items.push_back(std::move(item));
      }
      type_copies.push_back(std::move(ids));
    }
    out.copies.push_back(std::move(type_copies));

    const size_t begin = static_cast<size_t>(chosen) * block_size;
    pool = std::vector<Dim>(pool.begin() + static_cast<long>(begin),
                            pool.begin() + static_cast<long>(begin + block_size));
  }

  w.value = Rational(ell) * Rational(copies);
  inst.witness = std::move(w);
  require_witness(inst);
  return out;
}

Instance gen_random(size_t n, Dim d, size_t k, const Rational& epsilon, ValueMode mode,
                    uint64_t seed) {
  if (k > d) throw ParamError("gen_random: sparsity k cannot exceed d");
  if (epsilon < Rational(0) || epsilon >= Rational(1)) {
    throw ParamError("gen_random: epsilon must lie in [0, 1)");
  }
  const long grid = 65536;
  // floor((1 - epsilon) * 2^16): the largest admissible weight numerator.
  const Rational cap = (Rational(1) - epsilon) * Rational(grid);
  mpz_class cap_floor;
  mpz_fdiv_q(cap_floor.get_mpz_t(), cap.num().get_mpz_t(), cap.den().get_mpz_t());
  const long max_num = cap_floor.get_si();
  if (n > 0 && k > 0 && max_num < 1) {
    throw ParamError("gen_random: epsilon leaves no admissible weight on the 2^16 grid");
  }

  Instance inst;
  inst.dims = d;
  const char* mode_name = mode == ValueMode::kUnit      ? "unit"
                          : mode == ValueMode::kUniform ? "uniform"
                                                        : "coverage";
  inst.objective_kind = mode == ValueMode::kUnit      ? Objective::Kind::kCardinality
                        : mode == ValueMode::kUniform ? Objective::Kind::kModular
                                                      : Objective::Kind::kCoverage;
  inst.meta = {"random",
               "n=" + std::to_string(n) + ",d=" + std::to_string(d) + ",k=" +
                   std::to_string(k) + ",epsilon=" + epsilon.str() + ",mode=" + mode_name,
               seed};

  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    Item item;
    item.id = static_cast<ItemId>(i);
    std::set<Dim> dims;
    while (dims.size() < k) dims.insert(static_cast<Dim>(rng.below(d)));
    std::vector<std::pair<Dim, Rational>> entries;
    for (Dim dim : dims) {
      const long num = 1 + static_cast<long>(rng.below(static_cast<uint64_t>(max_num)));
      entries.emplace_back(dim, Rational(num, grid));
    }
    item.weights = SparseWeightVector(std::move(entries), d);
    switch (mode) {
      case ValueMode::kUnit:
        break;
      case ValueMode::kUniform:
        item.value = Rational(1 + static_cast<long>(rng.below(grid)), grid);
        break;
      case ValueMode::kCoverage: {
        std::set<ElementId> covered;
        const uint64_t universe = std::max<uint64_t>(1, 2 * n);
        const size_t count =
            1 + static_cast<size_t>(rng.below(std::min<uint64_t>(4, universe)));
        while (covered.size() < count) {
          covered.insert(static_cast<ElementId>(rng.below(universe)));
        }
        item.covers.assign(covered.begin(), covered.end());
        break;
      }
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

}  // namespace ovp
