#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ovpack/cli.hpp"
#include "ovpack/duel.hpp"
#include "ovpack/errors.hpp"
#include "ovpack/instance_io.hpp"
#include "ovpack/sweep.hpp"
#include "ovpack/trial.hpp"

using namespace ovp;

namespace {

// The displacement example as a two-line instance file.
const char* kTwoItemFile =
    "{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\n"
    "{\"id\":0,\"coords\":[[0,1,4]],\"value\":[1,1]}\n"
    "{\"id\":1,\"coords\":[[0,1,4]],\"value\":[10,1]}\n";

struct TempFile {
  explicit TempFile(const std::string& name) : path("/tmp/ovpack_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  std::string path;
};

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("instance files round-trip") {
    for (ValueMode mode : {ValueMode::kUnit, ValueMode::kUniform, ValueMode::kCoverage}) {
      const Instance original = gen_random(8, 4, 2, Rational(1, 4), mode, 31);
      std::stringstream buffer;
      write_instance(original, buffer);
      const Instance loaded = read_instance(buffer);
      CHECK(loaded.dims == original.dims);
      CHECK(loaded.objective_kind == original.objective_kind);
      REQUIRE(loaded.items.size() == original.items.size());
      for (size_t i = 0; i < loaded.items.size(); ++i) {
        CHECK(loaded.items[i].id == original.items[i].id);
        CHECK(loaded.items[i].weights.entries() == original.items[i].weights.entries());
        CHECK(loaded.items[i].value == original.items[i].value);
        CHECK(loaded.items[i].covers == original.items[i].covers);
      }
    }
    // Witness survives the round-trip and is re-verified on load.
    const Instance sampled = sample_noslack(4, 5).instance;
    std::stringstream buffer;
    write_instance(sampled, buffer);
    const Instance loaded = read_instance(buffer);
    REQUIRE(loaded.witness.has_value());
    CHECK(loaded.witness->ids == sampled.witness->ids);
    CHECK(loaded.witness->value == sampled.witness->value);
  }

  TEST_CASE("parse errors carry line numbers") {
    auto parse = [](const std::string& text) {
      std::stringstream in(text);
      return read_instance(in);
    };
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
      parse("{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\nnot json\n");
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
    try {
      parse(
          "{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\n"
          "{\"id\":0,\"coords\":[[0,1,4]],\"value\":[1,1]}\n"
          "{\"id\":0,\"coords\":[[0,1,4]],\"value\":[1,1]}\n");
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK(e.line == 3);  // duplicate id
    }
    CHECK_THROWS_AS(parse("{\"dims\":1,\"objective\":{\"type\":\"nope\"}}\n"), ParseError);
    // weight outside (0,1], dimension out of range, missing value
    CHECK_THROWS_AS(
        parse("{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\n"
              "{\"id\":0,\"coords\":[[0,3,2]],\"value\":[1,1]}\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse("{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\n"
              "{\"id\":0,\"coords\":[[7,1,2]],\"value\":[1,1]}\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse("{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\n"
              "{\"id\":0,\"coords\":[[0,1,2]]}\n"),
        ParseError);
  }

  TEST_CASE("trial on the displacement file keeps the dense item") {
    std::stringstream in(kTwoItemFile);
    const Instance instance = read_instance(in);
    const TrialReport report = run_trial(instance, Rational(3, 4), true);
    CHECK(report.final_kept == std::set<ItemId>{1});
    CHECK(report.f_kept == Rational(10));
    CHECK(report.audits_all_ok);
    CHECK(report.opt_source == OptSource::kBruteForce);
    // Offline, both quarters fit side by side (the engine's internal
    // margin is what forced the disposal online).
    CHECK(report.opt_value == Rational(11));
    CHECK(report.ratio_defined);
    CHECK(report.ratio == Rational(11, 10));
    CHECK(report.bound_ok);
  }

  TEST_CASE("trial on the empty instance defines the ratio as one") {
    Instance empty;
    empty.dims = 1;
    empty.objective_kind = Objective::Kind::kCardinality;
    const TrialReport report = run_trial(empty, Rational(1, 2), true);
    CHECK(report.f_kept == Rational(0));
    CHECK(report.opt_value == Rational(0));
    CHECK(report.ratio_defined);
    CHECK(report.ratio == Rational(1));
  }

  TEST_CASE("trial on a dyadic-phase instance reports the witness-sized optimum") {
    const Instance instance = sample_noslack(6, 42).instance;
    const TrialReport report = run_trial(instance, Rational::pow2(-12), true);
    CHECK(report.opt_value == Rational(6));
    CHECK(report.ratio_defined);
    CHECK(report.ratio >= Rational(1));
    CHECK(report.audits_all_ok);
    CHECK(report.bound_ok);
  }

  TEST_CASE("default epsilon is the tightest slack") {
    const Instance instance = sample_noslack(6, 42).instance;
    CHECK(default_epsilon(instance) == Rational::pow2(-12));
    Instance empty;
    empty.dims = 1;
    CHECK(default_epsilon(empty) == Rational(1, 2));
  }

  TEST_CASE("sweep with one trial equals the single run") {
    SweepConfig config;
    config.distribution = "random";
    config.n = 12;
    config.rdims = 4;
    config.k = 2;
    config.epsilon = Rational(1, 2);
    config.mode = ValueMode::kUniform;
    config.trials = 1;
    config.seed0 = 17;
    const SweepReport sweep = run_sweep_serial(config);
    const Instance instance =
        gen_random(12, 4, 2, Rational(1, 2), ValueMode::kUniform, 17);
    const TrialReport single = run_trial(instance, default_epsilon(instance), true);
    REQUIRE(sweep.rows.size() == 1);
    CHECK(trial_csv_row(sweep.rows[0]) == trial_csv_row(single));
    CHECK(sweep.mean_f == single.f_kept);
  }

  TEST_CASE("parallel sweep reproduces the serial reference exactly") {
    SweepConfig config;
    config.distribution = "noslack";
    config.d = 6;
    config.trials = 40;
    config.seed0 = 3;
    config.threads = 2;
    const SweepReport serial = run_sweep_serial(config);
    const SweepReport parallel = run_sweep(config);
    CHECK(serial.mean_f == parallel.mean_f);
    CHECK(serial.stderr_f == parallel.stderr_f);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (size_t i = 0; i < serial.rows.size(); ++i) {
      CHECK(serial.rows[i].f_kept == parallel.rows[i].f_kept);
      CHECK(serial.rows[i].final_kept == parallel.rows[i].final_kept);
    }
  }

  TEST_CASE("sweep bounds are the harmonic forms") {
    SweepConfig noslack;
    noslack.distribution = "noslack";
    noslack.d = 8;
    // 1 + sum_{t=1}^{7} 1/(9-t)
    Rational expected(1);
    for (int t = 1; t <= 7; ++t) expected += Rational(1, 9 - t);
    CHECK(*sweep_bound(noslack) == expected);

    SweepConfig small;
    small.distribution = "smallweight";
    small.ell = 3;
    small.epsilon_w = Rational(1, 4);
    CHECK(*sweep_bound(small) == Rational(4) * (Rational(1) + Rational(1, 6) + Rational(1, 5)));

    SweepConfig random;
    random.distribution = "random";
    CHECK(!sweep_bound(random).has_value());
  }

  TEST_CASE("duel against the big-small adversary meets the lemma ratio") {
    DuelConfig config;
    config.adversary = "slack-deterministic";
    config.k = 4;
    config.epsilon = Rational(1, 4);
    const DuelResult result = run_duel(config);
    CHECK(result.report.n_items == 9);  // engine keeps the opener throughout
    CHECK(result.report.f_kept == Rational(1));
    CHECK(result.report.opt_value == Rational(2));
    CHECK(result.report.ratio_defined);
    CHECK(result.report.ratio >= Rational(2));
    CHECK(result.report.audits_all_ok);
  }

  TEST_CASE("duel against the subset adversary pins both algorithms to one item") {
    for (const char* algorithm : {"engine", "greedy"}) {
      DuelConfig config;
      config.adversary = "slack-subsets";
      config.k = 3;
      config.epsilon = Rational(1, 4);
      config.algorithm = algorithm;
      const DuelResult result = run_duel(config);
      CHECK(result.report.n_items <= 6);
      CHECK(result.report.final_kept.size() <= 1);
      CHECK(result.report.opt_value >= Rational(3));
      CHECK(result.report.ratio_defined);
      CHECK(result.report.ratio >= Rational(3));
    }
  }

  TEST_CASE("rescaling gives the engine room on dyadic-phase instances") {
    const Instance instance = sample_noslack(6, 7).instance;
    const Instance same = rescale_instance(instance, Rational(1));
    CHECK(same.items[0].weights.entries() == instance.items[0].weights.entries());

    // factor 1/(1+eps) with eps = 1/4
    const Instance scaled = rescale_instance(instance, Rational(4, 5));
    CHECK(scaled.max_weight() <= Rational(4, 5));
    const TrialReport report = run_trial(scaled, Rational(1, 5), true);
    CHECK(report.audits_all_ok);
    CHECK_THROWS_AS(rescale_instance(instance, Rational(0)), ParamError);
    CHECK_THROWS_AS(rescale_instance(instance, Rational(3, 2)), ParamError);

    Instance empty;
    empty.dims = 2;
    CHECK(rescale_instance(empty, Rational(4, 5)).items.empty());
  }

  TEST_CASE("golden instance serialization for a fixed seed") {
    const Instance instance = gen_random(2, 3, 1, Rational(1, 4), ValueMode::kUniform, 7);
    std::stringstream buffer;
    write_instance(instance, buffer);
    const std::string expected =
        "{\"dims\":3,\"meta\":{\"generator\":\"random\",\"params\":"
        "\"n=2,d=3,k=1,epsilon=1/4,mode=uniform\",\"seed\":7},"
        "\"objective\":{\"type\":\"modular\"},\"schema\":\"ovpack-instance-v1\"}\n" +
        std::string("{\"coords\":[[0,9757,65536]],\"id\":0,\"value\":[10755,65536]}\n") +
        "{\"coords\":[[0,41435,65536]],\"id\":1,\"value\":[21769,32768]}\n";
    CHECK(buffer.str() == expected);
  }

  TEST_CASE("golden trial csv row for the displacement file") {
    std::stringstream in(kTwoItemFile);
    const Instance instance = read_instance(in);
    const TrialReport report = run_trial(instance, Rational(3, 4), true);
    CHECK(trial_csv_row(report) == "0,2,1,10,11,1.1,680,1");
  }

  TEST_CASE("golden trial json for the displacement file") {
    std::stringstream in(kTwoItemFile);
    const Instance instance = read_instance(in);
    const TrialReport report = run_trial(instance, Rational(3, 4), true);
    const std::string expected =
        R"({"algorithm":"engine","arrivals":[{"accepted":true,"audit_ok":true,)"
        R"("disposed":[],"fraction":{"exact":"1","float":1.0},"id":0,)"
        R"("value":{"exact":"1","float":1.0}},{"accepted":true,"audit_ok":true,)"
        R"("disposed":[0],"fraction":{"exact":"1","float":1.0},"id":1,)"
        R"("value":{"exact":"10","float":10.0}}],)"
        R"("bound":{"multiplier":{"exact":"68","float":68.0},"ok":true,)"
        R"("value":{"exact":"680","float":680.0}},"epsilon":"3/4",)"
        R"("final":{"audits_all_ok":true,"f_kept":{"exact":"10","float":10.0},)"
        R"("kept":[1]},"k_observed":1,"meta":{"generator":"file","params":"",)"
        R"("seed":0},"n_items":2,"opt":{"set":[0,1],"source":"brute-force",)"
        R"("value":{"exact":"11","float":11.0}},)"
        R"("ratio":{"exact":"11/10","float":1.0999999999999999},"schema":"ovpack-trial-v1"})";
    CHECK(trial_to_json(report).dump() == expected);
  }

  TEST_CASE("cli runs end to end") {
    TempFile instance_file("instance.jsonl");
    TempFile report_file("report.json");
    TempFile rescaled_file("rescaled.jsonl");
    {
      const char* argv[] = {"ovpack", "gen", "--gen", "noslack:d=4", "--seed", "9",
                            "--out", instance_file.path.c_str()};
      CHECK(cli_main(8, argv) == 0);
    }
    {
      const char* argv[] = {"ovpack", "run", "--instance", instance_file.path.c_str(),
                            "--out", report_file.path.c_str()};
      CHECK(cli_main(6, argv) == 0);
      std::ifstream in(report_file.path);
      std::stringstream text;
      text << in.rdbuf();
      CHECK(text.str().find("\"schema\": \"ovpack-trial-v1\"") != std::string::npos);
    }
    {
      const char* argv[] = {"ovpack", "rescale", "--in", instance_file.path.c_str(),
                            "--factor", "4/5", "--out", rescaled_file.path.c_str()};
      CHECK(cli_main(8, argv) == 0);
    }
    {
      const char* argv[] = {"ovpack", "run", "--gen", "random:n=5,d=3,k=1,seed=2"};
      CHECK(cli_main(4, argv) == 0);
    }
    {
      const char* argv[] = {"ovpack", "duel", "--adversary", "slack-subsets", "--k", "3"};
      CHECK(cli_main(6, argv) == 0);
    }
    {
      const char* argv[] = {"ovpack", "sweep", "--dist", "noslack", "--d", "4", "--trials",
                            "3"};
      CHECK(cli_main(8, argv) == 0);
    }
  }

  TEST_CASE("cli exit codes") {
    {  // unknown flag -> usage
      const char* argv[] = {"ovpack", "run", "--bogus"};
      CHECK(cli_main(3, argv) == 1);
    }
    {  // malformed file -> parse error
      TempFile bad("bad.jsonl");
      std::ofstream out(bad.path);
      out << "{\"dims\":1,\"objective\":{\"type\":\"modular\"}}\nnot json\n";
      out.close();
      const char* argv[] = {"ovpack", "run", "--instance", bad.path.c_str()};
      CHECK(cli_main(4, argv) == 2);
    }
    {  // missing file -> parse error
      const char* argv[] = {"ovpack", "run", "--instance", "/tmp/ovpack_no_such_file"};
      CHECK(cli_main(4, argv) == 2);
    }
  }
}
