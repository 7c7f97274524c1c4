#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "kslab/lab/config.hpp"
#include "kslab/lab/experiment.hpp"
#include "kslab/lab/report.hpp"

using namespace kslab;
using namespace kslab::lab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("kslab-test-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("default configs for every kind validate") {
  for (auto kind : {ExperimentKind::dispersion, ExperimentKind::decay, ExperimentKind::growth,
                    ExperimentKind::delta_sweep, ExperimentKind::picard, ExperimentKind::positivity,
                    ExperimentKind::norms_suite, ExperimentKind::evolve}) {
    CHECK_NOTHROW(validate(default_config(kind)));
  }
}

TEST_CASE("config echo round-trips through the parser") {
  const ExperimentConfig cfg = default_config(ExperimentKind::growth);
  const ExperimentConfig back = parse_config(to_json(cfg));
  CHECK(back.name == cfg.name);
  CHECK(back.A == cfg.A);
  CHECK(back.points[0] == cfg.points[0]);
  CHECK(back.initial.width == cfg.initial.width);
  CHECK(back.solver.horizon == cfg.solver.horizon);
  CHECK(back.seed == cfg.seed);
}

TEST_CASE("unknown keys and missing kind are rejected") {
  CHECK_THROWS_AS(parse_config(nlohmann::json{{"A", 2.0}}), ConfigError);
  nlohmann::json j = {{"kind", "growth"}, {"ampltiude", 1.0}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  nlohmann::json j2 = {{"kind", "growth"}, {"grid", {{"dmi", 1}}}};
  CHECK_THROWS_AS(parse_config(j2), ConfigError);
}

TEST_CASE("validation lists every violated precondition") {
  ExperimentConfig cfg = default_config(ExperimentKind::growth);
  cfg.A = 0.5;                 // growth needs A > 1
  cfg.points = {127, 0};       // odd
  cfg.solver.horizon = -2.0;   // negative
  try {
    validate(cfg);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.issues.size() >= 3);
    const std::string msg = e.what();
    CHECK(msg.find("A > 1") != std::string::npos);
    CHECK(msg.find("even") != std::string::npos);
    CHECK(msg.find("horizon") != std::string::npos);
  }
}

TEST_CASE("delta sweep config demands two decades and a weakly nonlinear target") {
  ExperimentConfig cfg = default_config(ExperimentKind::delta_sweep);
  cfg.delta_list = {1e-2, 5e-3};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = default_config(ExperimentKind::delta_sweep);
  cfg.target_amplitude = 0.5;  // above 0.1*A for A = 2
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("initial data builders") {
  ExperimentConfig cfg = default_config(ExperimentKind::evolve);
  cfg.initial.type = InitialData::Type::constant;
  cfg.initial.value = 3.5;
  const RealField c = build_initial(cfg);
  CHECK(field_max_abs(c) == doctest::Approx(3.5));
  CHECK(field_min(c) == doctest::Approx(3.5));

  cfg.initial.type = InitialData::Type::comb;
  cfg.initial.amplitude = 1.0;
  cfg.initial.width = 0.5;
  cfg.initial.period = 10.0;
  const RealField comb = build_initial(cfg);
  int peaks = 0;  // count strict local maxima above half height
  const int n = cfg.points[0];
  for (int i = 0; i < n; ++i) {
    const double prev = comb.values[(i + n - 1) % n];
    const double next = comb.values[(i + 1) % n];
    if (comb.values[i] > 0.5 && comb.values[i] > prev && comb.values[i] > next) ++peaks;
  }
  CHECK(peaks == 20);  // extent 200 / period 10

  ExperimentConfig pk = default_config(ExperimentKind::growth);
  const RealField packet = build_initial(pk);
  CHECK(std::abs(spatial_mean(packet)) <= 1e-15);

  ExperimentConfig rnd = default_config(ExperimentKind::evolve);
  rnd.initial.type = InitialData::Type::random_smooth;
  rnd.initial.amplitude = 0.25;
  const RealField r1 = build_initial(rnd);
  const RealField r2 = build_initial(rnd);
  CHECK(field_max_abs(r1) == doctest::Approx(0.25));
  CHECK(sup_distance(r1, r2) == 0.0);  // same seed, same field
}

TEST_CASE("experiment runs are deterministic: same config and seed give identical bytes") {
  ExperimentConfig cfg = default_config(ExperimentKind::growth);
  cfg.name = "determinism";
  cfg.points = {512, 0};
  cfg.solver.horizon = 3.0;
  const auto d1 = temp_dir("det1");
  const auto d2 = temp_dir("det2");
  run(cfg, d1.string());
  run(cfg, d2.string());
  const std::string s1 = slurp((d1 / "series.csv").string());
  const std::string s2 = slurp((d2 / "series.csv").string());
  CHECK(!s1.empty());
  CHECK(s1 == s2);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("series CSV format: header, ascending times, 17 significant digits") {
  ExperimentConfig cfg = default_config(ExperimentKind::evolve);
  cfg.name = "csv-format";
  cfg.solver.horizon = 1.0;
  cfg.solver.record_stride = 50;
  cfg.uloc_p = 2.0;
  const auto dir = temp_dir("csv");
  run(cfg, dir.string());
  std::ifstream in((dir / "series.csv").string());
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,l1,l2,linf,min,uloc_2");
  double prev_t = -1.0;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    double t, l1, l2, linf, mn, ul;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &l1, &l2, &linf, &mn, &ul) == 6);
    CHECK(t > prev_t);
    prev_t = t;
    ++rows;
  }
  CHECK(rows >= 3);
  // format_real keeps 17 significant digits
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  fs::remove_all(dir);
}

TEST_CASE("report JSON carries the schema version, echo, and recomputed references") {
  ExperimentConfig cfg = default_config(ExperimentKind::dispersion);
  const auto dir = temp_dir("report");
  const ExperimentReport rep = run(cfg, dir.string());
  CHECK(rep.all_passed());
  const auto j = nlohmann::json::parse(slurp((dir / "report.json").string()));
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.at("kind").get<std::string>() == "dispersion");
  CHECK(j.at("config").at("A").get<double>() == 2.0);
  CHECK(j.at("reference").contains("abscissa_formula"));
  CHECK(j.at("checks").is_array());
  CHECK(j.at("checks").size() >= 2);
  CHECK(j.at("all_passed").get<bool>());
  fs::remove_all(dir);
}

TEST_CASE("experiments run without touching the filesystem when out_dir is empty") {
  ExperimentConfig cfg = default_config(ExperimentKind::picard);
  const ExperimentReport rep = run(cfg);
  CHECK(rep.all_passed());
  CHECK(rep.artifacts.empty());
}

TEST_CASE("config files load from disk and overlay the defaults") {
  const auto dir = temp_dir("cfgfile");
  const auto path = (dir / "cfg.json").string();
  {
    std::ofstream out(path);
    out << R"({"kind": "picard", "name": "from-file", "A": 0.25, "picard_substeps": 32})";
  }
  const ExperimentConfig cfg = load_config_file(path);
  CHECK(cfg.kind == ExperimentKind::picard);
  CHECK(cfg.name == "from-file");
  CHECK(cfg.A == 0.25);
  CHECK(cfg.picard_substeps == 32);
  CHECK(cfg.points[0] == 256);  // untouched default
  CHECK_THROWS(load_config_file((dir / "missing.json").string()));
  fs::remove_all(dir);
}

TEST_CASE("kind names round-trip, including dashed aliases") {
  CHECK(kind_from_name("delta-sweep") == ExperimentKind::delta_sweep);
  CHECK(kind_from_name("norms-suite") == ExperimentKind::norms_suite);
  for (auto kind : {ExperimentKind::dispersion, ExperimentKind::decay, ExperimentKind::growth,
                    ExperimentKind::delta_sweep, ExperimentKind::picard, ExperimentKind::positivity,
                    ExperimentKind::norms_suite, ExperimentKind::evolve}) {
    CHECK(kind_from_name(kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(kind_from_name("unknown"), std::invalid_argument);
}
