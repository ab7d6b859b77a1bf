#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcomb/bases.hpp"
#include "bcomb/environments.hpp"
#include "bcomb/harness/config.hpp"
#include "bcomb/harness/csv.hpp"
#include "bcomb/harness/experiment.hpp"

using namespace bcomb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bcomb_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.kind = ExperimentKind::kKArmed;
  c.env.type = "karmed";
  c.env.noise = "bernoulli";
  c.env.means = {0.2, 0.8, 0.5};
  c.horizon = 10;
  c.replications = 2;
  c.targets = TargetRule::kGap;
  BaseConfig b;
  b.type = "ucb";
  b.C = 3.0;
  c.bases = {b};
  return c;
}

}  // namespace

TEST_CASE("calibration examples") {
  auto env_factory = [](Rng&) -> std::unique_ptr<Environment> {
    return make_karmed_env({0.9, 0.7}, {NoiseKind::kBernoulli, 0.0});
  };
  const auto optimal = calibrate_putative_bound([](Rng) { return make_fixed_arm(0); }, env_factory, 100, 0.5, 3, 1);
  CHECK(optimal.C == 0.0);
  CHECK(optimal.per_rep.size() == 3);

  const auto gap = calibrate_putative_bound([](Rng) { return make_fixed_arm(1); }, env_factory, 100, 0.5, 3, 1);
  CHECK(gap.C == doctest::Approx(2.0));

  CHECK_THROWS(calibrate_putative_bound([](Rng) { return make_fixed_arm(1); }, env_factory, 100, 0.4, 3, 1));
}

TEST_CASE("calibrated UCB constant is stable across disjoint seeds") {
  std::vector<double> means(10, 0.5);
  means[0] = 0.8;
  auto env_factory = [means](Rng&) -> std::unique_ptr<Environment> {
    return make_karmed_env(means, {NoiseKind::kBernoulli, 0.0});
  };
  const double conf = ucb_default_conf_scale(10000, 10, 0.05);
  auto base = [conf](Rng) { return make_ucb(10, conf); };
  const auto a = calibrate_putative_bound(base, env_factory, 10000, 0.5, 20, 11);
  const auto b = calibrate_putative_bound(base, env_factory, 10000, 0.5, 20, 12);
  CHECK(std::isfinite(a.C));
  CHECK(a.C > 0.0);
  CHECK(std::abs(a.C - b.C) <= 0.2 * std::max(a.C, b.C));
}

TEST_CASE("format_double round-trips with 17 digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-310, 6.02214076e23, 0.0, 1e300})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("fnv1a digest") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("config parsing") {
  using nlohmann::json;
  const json good = {{"horizon", 50},
                     {"environment", {{"type", "karmed"}, {"means", {0.1, 0.9}}, {"noise", "bernoulli"}}},
                     {"bases", {{{"type", "ucb"}, {"C", 2.0}}}}};
  const auto cfg = parse_experiment_config(good);
  CHECK(cfg.horizon == 50);
  CHECK(cfg.replications == 1);
  CHECK(cfg.bases.front().C.value() == 2.0);
  CHECK(parse_experiment_config(to_json(cfg)).horizon == 50);

  json typo = good;
  typo["horizn"] = 3;
  CHECK_THROWS_AS(parse_experiment_config(typo), ConfigError);

  json nested = good;
  nested["bases"][0]["alpah"] = 0.5;
  CHECK_THROWS_AS(parse_experiment_config(nested), ConfigError);

  json zero_reps = good;
  zero_reps["replications"] = 0;
  CHECK_THROWS_AS(parse_experiment_config(zero_reps), ConfigError);

  json bad_type = good;
  bad_type["environment"]["type"] = "casino";
  CHECK_THROWS_AS(parse_experiment_config(bad_type), ConfigError);

  json lin_on_karmed = good;
  lin_on_karmed["bases"][0]["type"] = "linucb";
  CHECK_THROWS_AS(parse_experiment_config(lin_on_karmed), ConfigError);

  json wrong_kind = good;
  wrong_kind["horizon"] = "ten";
  CHECK_THROWS_AS(parse_experiment_config(wrong_kind), ConfigError);

  CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("experiment output") {
  SUBCASE("row counts and schema") {
    const auto result = run_experiment(tiny_config());
    const fs::path dir = scratch("rows");
    write_experiment(result, dir.string());
    const std::string trace = slurp(dir / "trace_combiner.csv");
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 21);
    CHECK(trace.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.rfind(std::string(kSummaryHeader) + "\n", 0) == 0);
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    CHECK(meta["seed"] == 1);
    CHECK(meta["library_version"] == library_version());
    CHECK(meta["config_hash"].get<std::string>().size() == 16);
    fs::remove_all(dir);
  }
  SUBCASE("same config twice gives identical bytes, independent of threads") {
    ExperimentConfig cfg = tiny_config();
    cfg.horizon = 300;
    cfg.replications = 5;
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    write_experiment(run_experiment(cfg), a.string());
    cfg.threads = 3;
    write_experiment(run_experiment(cfg), b.string());
    for (const char* f : {"trace_combiner.csv", "trace_ucb.csv", "summary.csv"}) CHECK(slurp(a / f) == slurp(b / f));
    fs::remove_all(a);
    fs::remove_all(b);
  }
  SUBCASE("summary means equal per-round trace averages") {
    ExperimentConfig cfg = tiny_config();
    cfg.horizon = 200;
    cfg.replications = 4;
    const auto result = run_experiment(cfg);
    for (const auto& p : result.policies) {
      const auto rows = summarize(p.reps);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        double sum = 0.0;
        for (const auto& r : p.reps) sum += r.rows[t].cum_regret;
        CHECK(std::abs(rows[t].mean - sum / 4.0) <= 1e-12);
      }
    }
  }
  SUBCASE("model selection preset runs baseline, oracle and combiner") {
    ExperimentConfig cfg = preset_config("modelselection");
    CHECK(cfg.bases.size() == 7);
    cfg.env.arms = 30;
    cfg.horizon = 50;
    cfg.replications = 1;
    cfg.calibration_replications = 1;
    const auto result = run_experiment(cfg);
    std::vector<std::string> names;
    for (const auto& p : result.policies) names.push_back(p.name);
    CHECK(names == std::vector<std::string>{"combiner", "baseline", "oracle"});
    CHECK(result.calibration.size() == 7);
  }
  SUBCASE("missing bound is a config error") {
    ExperimentConfig cfg = tiny_config();
    cfg.bases.front().C.reset();
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  }
  SUBCASE("unwritable output directory is reported") {
    const auto result = run_experiment(tiny_config());
    CHECK_THROWS(write_experiment(result, "/proc/bcomb_cannot_write_here"));
  }
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) CHECK_NOTHROW(parse_experiment_config(to_json(preset_config(name))));
  CHECK(preset_config("misspecified", 1.0).env.alpha_mix == 1.0);
  CHECK_THROWS_AS(preset_config("misspecified", 0.5), ConfigError);
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
  const auto ms = preset_config("modelselection");
  CHECK(ms.env.dim == 128);
  CHECK(ms.env.dim_star == 8);
  CHECK(ms.env.arms == 1000);
}
