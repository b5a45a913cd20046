#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fpp/config.hpp"
#include "fpp/errors.hpp"
#include "fpp/experiment.hpp"

using namespace fpp;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fpplab_test_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json summary_of(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "summary.json")); }

const char* kVariance = R"(
[experiment]
kind = variance
[distribution]
atoms = 1:0.7, 2:0.3
[geometry]
n_list = 8, 16
theta = pi/4
[statistics]
reps = 12
seed = 3
)";

}  // namespace

TEST_CASE("config parsing and defaults") {
  const auto cfg = parse(kVariance);
  CHECK(cfg.kind == ExperimentKind::variance);
  CHECK(cfg.n_list == std::vector<int>{8, 16});
  CHECK(cfg.theta == doctest::Approx(0.785398163));
  CHECK(cfg.reps == 12);
  CHECK(cfg.distribution() == WeightDistribution({{1.0, 0.7}, {2.0, 0.3}}));
  CHECK(cfg.distribution() == WeightDistribution::two_atom(0.7));
  CHECK(cfg.ci_level == 0.95);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[experiment]\nkind = shape\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[geometry]\nR = 128\n"), ConfigError);  // kind missing
  CHECK_THROWS_AS(parse("[experiment]\nkind = teleport\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = shape\n[distribution]\natoms = 1:0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = shape\n[geometry]\nR = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = shape\n[geometry]\nR = 16\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = bypass\n[parameters]\na = 1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = trapping\n").validate(), ConfigError);
}

TEST_CASE("atom and piece syntax") {
  CHECK(parse_atoms("1:0.25, 3:0.75").size() == 2);
  CHECK_THROWS_AS(parse_atoms("1-0.5"), ConfigError);
  const auto pieces = parse_pieces("uniform 1 2 0.2; exponential 2 inf 1.5 0.1");
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].kind == PieceKind::uniform);
  CHECK(std::isinf(pieces[1].upper));
  CHECK(pieces[1].rate == 1.5);
  CHECK_THROWS_AS(parse_pieces("gamma 1 2 0.2"), ConfigError);
}

TEST_CASE("config hash ignores threads and tracks substance") {
  auto a = parse(kVariance), b = parse(kVariance);
  b.threads = 3;
  b.parallel = false;
  CHECK(a.hash() == b.hash());
  b.seed = 4;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash_hex().size() == 16);
}

TEST_CASE("degenerate law passes the zero-slope variance gate") {
  auto cfg = parse(std::string(kVariance) + "[parameters]\nexpect_slope = zero\n");
  cfg.atoms_text = "1:1";
  cfg.dist = WeightDistribution({{1.0, 1.0}});
  const auto dir = scratch("p1");
  const auto out = run_experiment(cfg, dir.string());
  CHECK(out.gate_passed());
  const auto s = summary_of(dir);
  CHECK(s["kind"] == "summary");
  CHECK(s["schema_version"] == kSchemaVersion);
  CHECK(s["gate"]["passed"] == true);
  CHECK(s["config"].contains("distribution.canonical"));
  CHECK_FALSE(s["config"].contains("statistics.threads"));
  CHECK(fs::exists(dir / "timing.json"));
  fs::remove_all(dir);
}

TEST_CASE("oracle run writes exact rationals") {
  const auto cfg = parse("[experiment]\nkind = oracle\n[parameters]\noracle_n = 1\noracle_m = 1\noracle_p = 1/2\n");
  const auto dir = scratch("oracle");
  const auto out = run_experiment(cfg, dir.string());
  CHECK(out.gate_passed());
  const auto s = summary_of(dir);
  CHECK(s["results"]["ordering_holds"] == true);
  CHECK(s["results"]["p"] == "1/2");
  CHECK(s["results"]["e_ray"]["exact"].is_string());
  fs::remove_all(dir);
}

TEST_CASE("records and summary are byte-identical across thread counts") {
  auto cfg = parse(kVariance);
  const auto d1 = scratch("det1"), d2 = scratch("det2"), d3 = scratch("det3");
  cfg.threads = 1;
  run_experiment(cfg, d1.string());
  cfg.threads = 4;
  run_experiment(cfg, d2.string());
  cfg.parallel = false;
  run_experiment(cfg, d3.string());
  for (const char* f : {"records.csv", "summary.json"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
    CHECK(slurp(d1 / f) == slurp(d3 / f));
  }
  const std::string rec = slurp(d1 / "records.csv");
  CHECK(rec.rfind("# fpplab records schema_version=1 kind=variance config_hash=" + cfg.hash_hex(), 0) == 0);
  for (const auto& d : {d1, d2, d3}) fs::remove_all(d);
}

TEST_CASE("shipped configs parse and validate") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(FPP_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const auto cfg = load_config(entry.path().string());
    if (cfg.kind != ExperimentKind::trapping) CHECK_NOTHROW(cfg.validate());
  }
  CHECK(seen >= experiment_kind_names().size());
}

TEST_CASE("missing config file is a configuration error") {
  CHECK_THROWS_AS(load_config("/nonexistent/fpplab.ini"), ConfigError);
}
