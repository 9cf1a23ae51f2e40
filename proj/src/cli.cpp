#include "ovpack/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ovpack/duel.hpp"
#include "ovpack/errors.hpp"
#include "ovpack/instance_io.hpp"
#include "ovpack/sweep.hpp"
#include "ovpack/trial.hpp"

namespace ovp {
namespace {

ValueMode mode_from_name(const std::string& name) {
  if (name == "unit") return ValueMode::kUnit;
  if (name == "uniform") return ValueMode::kUniform;
  if (name == "coverage") return ValueMode::kCoverage;
  throw ParamError("unknown value mode '" + name + "'");
}

// "name:key=val,key=val" generator specs for `run` and `gen`.
Instance instance_from_spec(const std::string& spec, std::optional<uint64_t> seed_override) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string pair;
    while (std::getline(rest, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) throw ParamError("generator spec: expected key=value");
      kv[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
  }
  auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  uint64_t seed = std::stoull(get("seed", "0"));
  if (seed_override) seed = *seed_override;

  if (name == "random") {
    return gen_random(std::stoul(get("n", "10")), static_cast<Dim>(std::stoul(get("d", "5"))),
                      std::stoul(get("k", "2")), Rational::parse(get("epsilon", "1/4")),
                      mode_from_name(get("mode", "unit")), seed);
  }
  if (name == "noslack") {
    return sample_noslack(std::stoi(get("d", "6")), seed).instance;
  }
  if (name == "slack-random") {
    return sample_slack_random(std::stoi(get("ell", "4")),
                               Rational::parse(get("epsilon", "1/4")), seed,
                               get("shuffle", "0") == "1")
        .instance;
  }
  if (name == "smallweight") {
    return sample_smallweight(std::stoi(get("ell", "3")),
                              Rational::parse(get("epsilon_w", "1/4")), seed)
        .instance;
  }
  throw ParamError("unknown generator '" + name + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  out << text;
}

int run_command(const std::string& instance_path, const std::string& gen_spec,
                const std::string& epsilon_text, std::optional<uint64_t> seed,
                const std::string& audit, const std::string& out_path,
                const std::string& format) {
  Instance instance;
  if (!instance_path.empty()) {
    instance = read_instance_file(instance_path);
  } else if (!gen_spec.empty()) {
    instance = instance_from_spec(gen_spec, seed);
  } else {
    throw ParamError("run: provide --instance or --gen");
  }
  const Rational epsilon =
      epsilon_text.empty() ? default_epsilon(instance) : Rational::parse(epsilon_text);
  const TrialReport report = run_trial(instance, epsilon, audit != "off");

  std::string text;
  if (format == "csv") {
    text = trial_csv_header() + "\n" + trial_csv_row(report) + "\n";
  } else {
    text = trial_to_json(report).dump(2) + "\n";
  }
  if (!out_path.empty()) {
    write_text(out_path, text);
  } else {
    std::cout << text;
  }
  std::cout << "kept " << report.final_kept.size() << " items, f(S) = "
            << report.f_kept.str();
  if (report.opt_source != OptSource::kNone) {
    std::cout << ", opt = " << report.opt_value.str() << " ("
              << (report.opt_source == OptSource::kBruteForce ? "brute-force" : "witness")
              << ")";
    if (report.ratio_defined) std::cout << ", ratio = " << report.ratio.to_double();
    if (report.ratio_infinite) std::cout << ", ratio = inf";
  }
  std::cout << "\n";
  if (!report.audits_all_ok) {
    std::cerr << "audit violation: " << report.first_audit_failure << "\n";
    return 3;
  }
  return 0;
}

int sweep_command(SweepConfig config, const std::string& engine_epsilon_text,
                  const std::string& out_base, const std::string& format) {
  if (!engine_epsilon_text.empty()) {
    config.engine_epsilon = Rational::parse(engine_epsilon_text);
  }
  const SweepReport report = run_sweep(config);
  const std::string summary = sweep_to_json(report).dump(2) + "\n";
  if (!out_base.empty()) {
    write_text(out_base + ".csv", sweep_to_csv(report));
    write_text(out_base + ".json", summary);
  }
  if (out_base.empty() && format == "csv") {
    std::cout << sweep_to_csv(report);
  } else {
    std::cout << summary;
  }
  for (const TrialReport& row : report.rows) {
    if (!row.audits_all_ok) {
      std::cerr << "audit violation (seed " << row.meta.seed
                << "): " << row.first_audit_failure << "\n";
      return 3;
    }
  }
  return 0;
}

int duel_command(const DuelConfig& config, const std::string& out_path,
                 const std::string& transcript_path, const std::string& format) {
  const DuelResult result = run_duel(config);
  const std::string text =
      format == "csv" ? trial_csv_header() + "\n" + trial_csv_row(result.report) + "\n"
                      : trial_to_json(result.report).dump(2) + "\n";
  if (!out_path.empty()) {
    write_text(out_path, text);
  } else {
    std::cout << text;
  }
  if (!transcript_path.empty()) write_instance_file(result.transcript, transcript_path);
  std::cout << "adversary emitted " << result.report.n_items << " items; kept "
            << result.report.final_kept.size() << ", opt(witness) = "
            << result.report.opt_value.str() << "\n";
  if (!result.report.audits_all_ok) {
    std::cerr << "audit violation: " << result.report.first_audit_failure << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"online vector packing with free disposal: engine, generators, harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run the engine over one instance");
  std::string run_instance, run_gen, run_epsilon, run_out;
  std::string run_audit = "on", run_format = "json";
  std::optional<uint64_t> run_seed;
  run->add_option("--instance", run_instance, "instance file (line-delimited JSON)");
  run->add_option("--gen", run_gen, "generator spec, e.g. noslack:d=6,seed=42");
  run->add_option("--epsilon", run_epsilon, "engine slack (default: tightest for instance)");
  run->add_option("--seed", run_seed, "seed override for --gen");
  run->add_option("--audit", run_audit, "on|off")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--out", run_out, "report path (default: stdout)");
  run->add_option("--format", run_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over a distribution");
  SweepConfig sweep_config;
  std::string sweep_epsilon = "1/4", sweep_epsilon_w = "1/4", sweep_engine_epsilon;
  std::string sweep_mode = "unit", sweep_audit = "on", sweep_out, sweep_format = "json";
  sweep->add_option("--dist", sweep_config.distribution,
                    "slack-random|noslack|smallweight|random")
      ->required()
      ->check(CLI::IsMember({"slack-random", "noslack", "smallweight", "random"}));
  sweep->add_option("--ell", sweep_config.ell, "phases (slack-random, smallweight)");
  sweep->add_option("--d", sweep_config.d, "dimensions (noslack)");
  sweep->add_option("--epsilon", sweep_epsilon, "slack parameter of the distribution");
  sweep->add_option("--epsilon-w", sweep_epsilon_w, "weight value (smallweight)");
  sweep->add_option("--n", sweep_config.n, "items (random)");
  sweep->add_option("--dims", sweep_config.rdims, "dimensions (random)");
  sweep->add_option("--k", sweep_config.k, "sparsity (random)");
  sweep->add_option("--mode", sweep_mode, "unit|uniform|coverage (random)")
      ->check(CLI::IsMember({"unit", "uniform", "coverage"}));
  sweep->add_option("--engine-epsilon", sweep_engine_epsilon,
                    "engine slack override (default: tightest per sample)");
  sweep->add_option("--trials", sweep_config.trials, "number of independent seeds")
      ->required();
  sweep->add_option("--seed", sweep_config.seed0, "first seed");
  sweep->add_option("--threads", sweep_config.threads, "parallel trial threads (0 = auto)");
  sweep->add_option("--audit", sweep_audit, "on|off")->check(CLI::IsMember({"on", "off"}));
  sweep->add_option("--out", sweep_out, "base path; writes <out>.csv and <out>.json");
  sweep->add_option("--format", sweep_format, "json|csv (stdout format when no --out)")
      ->check(CLI::IsMember({"json", "csv"}));

  // duel
  auto* duel = app.add_subcommand("duel", "adaptive adversary against an online algorithm");
  DuelConfig duel_config;
  std::string duel_epsilon = "1/4", duel_engine_epsilon, duel_out, duel_transcript;
  std::string duel_format = "json";
  std::string duel_audit = "on";
  duel->add_option("--adversary", duel_config.adversary,
                   "slack-deterministic|slack-subsets")
      ->required()
      ->check(CLI::IsMember({"slack-deterministic", "slack-subsets"}));
  duel->add_option("--k", duel_config.k, "sparsity parameter")->required();
  duel->add_option("--epsilon", duel_epsilon, "slack parameter");
  duel->add_option("--algorithm", duel_config.algorithm, "engine|greedy")
      ->check(CLI::IsMember({"engine", "greedy"}));
  duel->add_option("--engine-epsilon", duel_engine_epsilon, "engine slack override");
  duel->add_option("--audit", duel_audit, "on|off")->check(CLI::IsMember({"on", "off"}));
  duel->add_option("--out", duel_out, "report path (default: stdout)");
  duel->add_option("--format", duel_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  duel->add_option("--save-transcript", duel_transcript, "write the emitted sequence");

  // gen
  auto* gen = app.add_subcommand("gen", "sample an instance and write it to a file");
  std::string gen_spec, gen_out;
  std::optional<uint64_t> gen_seed;
  gen->add_option("--gen", gen_spec, "generator spec, e.g. smallweight:ell=3,epsilon_w=1/4")
      ->required();
  gen->add_option("--seed", gen_seed, "seed override");
  gen->add_option("--out", gen_out, "output instance file")->required();

  // rescale
  auto* rescale = app.add_subcommand("rescale", "multiply all weights by an exact factor");
  std::string rescale_in, rescale_factor = "1", rescale_out;
  rescale->add_option("--in", rescale_in, "input instance file")->required();
  rescale->add_option("--factor", rescale_factor, "factor in (0,1], e.g. 4/5");
  rescale->add_option("--out", rescale_out, "output instance file")->required();

  try {
    app.parse(argc, argv);

    if (run->parsed()) {
      return run_command(run_instance, run_gen, run_epsilon, run_seed, run_audit, run_out,
                         run_format);
    }
    if (sweep->parsed()) {
      sweep_config.epsilon = Rational::parse(sweep_epsilon);
      sweep_config.epsilon_w = Rational::parse(sweep_epsilon_w);
      sweep_config.mode = mode_from_name(sweep_mode);
      sweep_config.audit = sweep_audit != "off";
      return sweep_command(sweep_config, sweep_engine_epsilon, sweep_out, sweep_format);
    }
    if (duel->parsed()) {
      duel_config.epsilon = Rational::parse(duel_epsilon);
      if (!duel_engine_epsilon.empty()) {
        duel_config.engine_epsilon = Rational::parse(duel_engine_epsilon);
      }
      duel_config.audit = duel_audit != "off";
      return duel_command(duel_config, duel_out, duel_transcript, duel_format);
    }
    if (gen->parsed()) {
      write_instance_file(instance_from_spec(gen_spec, gen_seed), gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (rescale->parsed()) {
      const Instance scaled =
          rescale_instance(read_instance_file(rescale_in), Rational::parse(rescale_factor));
      write_instance_file(scaled, rescale_out);
      std::cout << "wrote " << rescale_out << "\n";
      return 0;
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ovp
