#include "kslab/lab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "kslab/linsemi.hpp"

namespace kslab::lab {

using nlohmann::json;

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::dispersion: return "dispersion";
    case ExperimentKind::decay: return "decay";
    case ExperimentKind::growth: return "growth";
    case ExperimentKind::delta_sweep: return "delta_sweep";
    case ExperimentKind::picard: return "picard";
    case ExperimentKind::positivity: return "positivity";
    case ExperimentKind::norms_suite: return "norms_suite";
    case ExperimentKind::evolve: return "evolve";
  }
  return "evolve";
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "dispersion") return ExperimentKind::dispersion;
  if (name == "decay") return ExperimentKind::decay;
  if (name == "growth") return ExperimentKind::growth;
  if (name == "delta_sweep" || name == "delta-sweep") return ExperimentKind::delta_sweep;
  if (name == "picard") return ExperimentKind::picard;
  if (name == "positivity") return ExperimentKind::positivity;
  if (name == "norms_suite" || name == "norms-suite") return ExperimentKind::norms_suite;
  if (name == "evolve") return ExperimentKind::evolve;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

Grid ExperimentConfig::grid() const { return make_grid(dim, extent, points); }

ConfigError::ConfigError(const std::vector<std::string>& iss)
    : std::runtime_error([&] {
        std::ostringstream oss;
        oss << "invalid experiment config (" << iss.size() << " issue" << (iss.size() == 1 ? "" : "s")
            << "):";
        for (const auto& s : iss) oss << "\n  - " << s;
        return oss.str();
      }()),
      issues(iss) {}

ExperimentConfig default_config(ExperimentKind kind) {
  constexpr double pi = std::numbers::pi;
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::dispersion:
      c.name = "dispersion-A2";
      c.A = 2.0;
      c.extent = {64.0 * pi, 0.0};
      c.points = {1024, 0};
      break;
    case ExperimentKind::decay:
      c.name = "decay-A0.5";
      c.A = 0.5;
      c.extent = {400.0, 0.0};
      c.points = {4096, 0};
      c.initial = {InitialData::Type::gaussian, 1.0, 0.25, -1.0, 0.0, 4.0, 0.0, 2.0};
      c.probe.p = inf_p;
      c.probe.q = 1.0;
      c.probe.count = 25;
      c.probe.t_min = 5.0;
      c.probe.t_max = 200.0;
      c.fit.tolerance = 0.05;
      break;
    case ExperimentKind::growth:
      c.name = "growth-A4";
      c.A = 4.0;
      c.extent = {64.0 * pi, 0.0};
      c.points = {1024, 0};
      c.initial.type = InitialData::Type::packet;
      c.initial.amplitude = 1e-4;
      c.initial.width = 18.0;
      c.initial.k = 0.0;  // peak wavenumber
      c.solver.horizon = 14.0;
      c.solver.record_stride = 10;
      c.fit.tolerance = 0.05;
      break;
    case ExperimentKind::delta_sweep:
      c.name = "delta-sweep-A2";
      c.A = 2.0;
      c.extent = {96.0 * pi, 0.0};
      c.points = {1536, 0};
      c.initial.type = InitialData::Type::packet;
      c.initial.width = 25.0;
      c.initial.k = 0.0;
      c.solver.horizon = 90.0;
      c.solver.record_stride = 5;
      c.delta_list = {1e-2, 1e-3, 1e-4, 1e-5};
      c.target_amplitude = 0.2;
      c.fit.tolerance = 0.10;
      break;
    case ExperimentKind::picard:
      c.name = "picard-A0.5";
      c.A = 0.5;
      c.extent = {16.0 * pi, 0.0};
      c.points = {256, 0};
      c.initial = {InitialData::Type::gaussian, 0.01, 2.0, -1.0, 0.0, 4.0, 0.0, 2.0};
      c.solver.horizon = 0.1;
      c.picard_max_iter = 8;
      c.picard_substeps = 64;
      break;
    case ExperimentKind::positivity:
      c.name = "positivity-bump";
      c.A = 0.0;
      c.extent = {50.0, 0.0};
      c.points = {512, 0};
      c.initial = {InitialData::Type::gaussian, 0.5, 2.0, -1.0, 0.0, 4.0, 0.0, 2.0};
      c.solver.formulation = Formulation::raw;
      c.solver.horizon = 20.0;
      c.solver.record_stride = 20;
      c.solver.save_stride = 10;
      break;
    case ExperimentKind::norms_suite:
      c.name = "norms-suite";
      c.extent = {32.0, 0.0};
      c.points = {256, 0};
      c.suite_fields_1d = 150;
      c.suite_fields_2d = 50;
      break;
    case ExperimentKind::evolve:
      c.name = "evolve-A0.5";
      c.A = 0.5;
      c.extent = {200.0, 0.0};
      c.points = {1024, 0};
      c.initial = {InitialData::Type::gaussian, 0.05, 2.0, -1.0, 0.0, 4.0, 0.0, 2.0};
      c.solver.horizon = 200.0;
      c.solver.record_stride = 100;
      break;
  }
  return c;
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where,
                std::vector<std::string>& issues) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) issues.push_back("unknown key '" + it.key() + "' in " + where);
  }
}

InitialData::Type initial_type_from_name(const std::string& s) {
  if (s == "gaussian") return InitialData::Type::gaussian;
  if (s == "packet") return InitialData::Type::packet;
  if (s == "comb") return InitialData::Type::comb;
  if (s == "constant") return InitialData::Type::constant;
  if (s == "random" || s == "random_smooth") return InitialData::Type::random_smooth;
  throw std::invalid_argument("unknown initial data type: " + s);
}

std::string initial_type_name(InitialData::Type t) {
  switch (t) {
    case InitialData::Type::gaussian: return "gaussian";
    case InitialData::Type::packet: return "packet";
    case InitialData::Type::comb: return "comb";
    case InitialData::Type::constant: return "constant";
    case InitialData::Type::random_smooth: return "random_smooth";
  }
  return "gaussian";
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  std::vector<std::string> issues;
  if (!j.is_object()) throw ConfigError({"config root must be a JSON object"});
  if (!j.contains("kind")) throw ConfigError({"config requires a 'kind' field"});

  ExperimentKind kind;
  try {
    kind = kind_from_name(j.at("kind").get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError({e.what()});
  }
  ExperimentConfig c = default_config(kind);

  check_keys(j,
             {"name", "kind", "grid", "A", "initial", "solver", "fit", "probe", "seed",
              "delta_list", "target_amplitude", "picard_max_iter", "picard_substeps", "uloc_p",
              "suite_fields_1d", "suite_fields_2d"},
             "config", issues);

  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("A")) c.A = j.at("A").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("uloc_p")) c.uloc_p = j.at("uloc_p").get<double>();
  if (j.contains("target_amplitude")) c.target_amplitude = j.at("target_amplitude").get<double>();
  if (j.contains("picard_max_iter")) c.picard_max_iter = j.at("picard_max_iter").get<int>();
  if (j.contains("picard_substeps")) c.picard_substeps = j.at("picard_substeps").get<int>();
  if (j.contains("suite_fields_1d")) c.suite_fields_1d = j.at("suite_fields_1d").get<int>();
  if (j.contains("suite_fields_2d")) c.suite_fields_2d = j.at("suite_fields_2d").get<int>();
  if (j.contains("delta_list")) c.delta_list = j.at("delta_list").get<std::vector<double>>();

  if (j.contains("grid")) {
    const json& gj = j.at("grid");
    check_keys(gj, {"dim", "extent", "points"}, "grid", issues);
    if (gj.contains("dim")) c.dim = gj.at("dim").get<int>();
    if (gj.contains("extent")) {
      if (gj.at("extent").is_array()) {
        auto v = gj.at("extent").get<std::vector<double>>();
        for (std::size_t a = 0; a < std::min<std::size_t>(2, v.size()); ++a) c.extent[a] = v[a];
      } else {
        c.extent = {gj.at("extent").get<double>(), gj.at("extent").get<double>()};
      }
    }
    if (gj.contains("points")) {
      if (gj.at("points").is_array()) {
        auto v = gj.at("points").get<std::vector<int>>();
        for (std::size_t a = 0; a < std::min<std::size_t>(2, v.size()); ++a) c.points[a] = v[a];
      } else {
        c.points = {gj.at("points").get<int>(), gj.at("points").get<int>()};
      }
    }
    if (c.dim == 2 && c.points[1] == 0) c.points[1] = c.points[0];
    if (c.dim == 2 && c.extent[1] == 0.0) c.extent[1] = c.extent[0];
  }

  if (j.contains("initial")) {
    const json& ij = j.at("initial");
    check_keys(ij, {"type", "amplitude", "width", "center", "k", "period", "value", "corr_length"},
               "initial", issues);
    try {
      if (ij.contains("type")) c.initial.type = initial_type_from_name(ij.at("type").get<std::string>());
    } catch (const std::exception& e) {
      issues.push_back(e.what());
    }
    if (ij.contains("amplitude")) c.initial.amplitude = ij.at("amplitude").get<double>();
    if (ij.contains("width")) c.initial.width = ij.at("width").get<double>();
    if (ij.contains("center")) c.initial.center = ij.at("center").get<double>();
    if (ij.contains("k")) c.initial.k = ij.at("k").get<double>();
    if (ij.contains("period")) c.initial.period = ij.at("period").get<double>();
    if (ij.contains("value")) c.initial.value = ij.at("value").get<double>();
    if (ij.contains("corr_length")) c.initial.corr_length = ij.at("corr_length").get<double>();
  }

  if (j.contains("solver")) {
    const json& sj = j.at("solver");
    check_keys(sj,
               {"formulation", "scheme", "dt", "horizon", "dealias", "positivity_tol",
                "blowup_threshold", "record_stride", "save_stride"},
               "solver", issues);
    if (sj.contains("formulation")) {
      const auto s = sj.at("formulation").get<std::string>();
      if (s == "raw") c.solver.formulation = Formulation::raw;
      else if (s == "perturbation") c.solver.formulation = Formulation::perturbation;
      else issues.push_back("solver.formulation must be 'raw' or 'perturbation'");
    }
    if (sj.contains("scheme")) {
      const auto s = sj.at("scheme").get<std::string>();
      if (s == "etd1") c.solver.scheme = Scheme::etd1;
      else if (s == "etd_rk2") c.solver.scheme = Scheme::etd_rk2;
      else issues.push_back("solver.scheme must be 'etd1' or 'etd_rk2'");
    }
    if (sj.contains("dt")) c.solver.dt = sj.at("dt").get<double>();
    if (sj.contains("horizon")) c.solver.horizon = sj.at("horizon").get<double>();
    if (sj.contains("dealias")) c.solver.dealias = sj.at("dealias").get<bool>();
    if (sj.contains("positivity_tol")) c.solver.positivity_tol = sj.at("positivity_tol").get<double>();
    if (sj.contains("blowup_threshold")) c.solver.blowup_threshold = sj.at("blowup_threshold").get<double>();
    if (sj.contains("record_stride")) c.solver.record_stride = sj.at("record_stride").get<int>();
    if (sj.contains("save_stride")) c.solver.save_stride = sj.at("save_stride").get<int>();
  }

  if (j.contains("fit")) {
    const json& fj = j.at("fit");
    check_keys(fj, {"t_min", "t_max", "tolerance"}, "fit", issues);
    if (fj.contains("t_min")) c.fit.t_min = fj.at("t_min").get<double>();
    if (fj.contains("t_max")) c.fit.t_max = fj.at("t_max").get<double>();
    if (fj.contains("tolerance")) c.fit.tolerance = fj.at("tolerance").get<double>();
  }

  if (j.contains("probe")) {
    const json& pj = j.at("probe");
    check_keys(pj, {"p", "q", "times", "count", "t_min", "t_max"}, "probe", issues);
    if (pj.contains("p")) {
      if (pj.at("p").is_string()) c.probe.p = inf_p;  // "inf"
      else c.probe.p = pj.at("p").get<double>();
    }
    if (pj.contains("q")) c.probe.q = pj.at("q").get<double>();
    if (pj.contains("times")) c.probe.times = pj.at("times").get<std::vector<double>>();
    if (pj.contains("count")) c.probe.count = pj.at("count").get<int>();
    if (pj.contains("t_min")) c.probe.t_min = pj.at("t_min").get<double>();
    if (pj.contains("t_max")) c.probe.t_max = pj.at("t_max").get<double>();
  }

  if (!issues.empty()) throw ConfigError(issues);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return parse_config(j);
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  if (cfg.name.empty()) issues.push_back("name must not be empty");

  Grid g;
  bool grid_ok = true;
  try {
    g = cfg.grid();
  } catch (const std::exception& e) {
    grid_ok = false;
    issues.push_back(e.what());
  }

  const auto& in = cfg.initial;
  if (!std::isfinite(in.amplitude)) issues.push_back("initial.amplitude must be finite");
  switch (in.type) {
    case InitialData::Type::gaussian:
    case InitialData::Type::packet:
      if (!(in.width > 0.0)) issues.push_back("initial.width must be positive");
      if (grid_ok && 5.0 * in.width > 0.5 * g.extent[0])
        issues.push_back("localized data must stay >= 5 widths from wrap-around (5*width <= extent/2)");
      break;
    case InitialData::Type::comb:
      if (!(in.width > 0.0)) issues.push_back("initial.width must be positive");
      if (!(in.period > 2.0 * in.width)) issues.push_back("comb period must exceed twice the bump width");
      break;
    case InitialData::Type::constant:
      break;
    case InitialData::Type::random_smooth:
      if (!(in.corr_length > 0.0)) issues.push_back("initial.corr_length must be positive");
      break;
  }
  if (in.type == InitialData::Type::packet && in.k <= 0.0 && cfg.A <= 1.0)
    issues.push_back("packet carrier defaults to the peak wavenumber, which requires A > 1");

  if (!(cfg.solver.horizon > 0.0)) issues.push_back("solver.horizon must be positive");
  if (cfg.solver.record_stride < 1) issues.push_back("solver.record_stride must be >= 1");
  if (cfg.solver.save_stride < 0) issues.push_back("solver.save_stride must be >= 0");
  if (cfg.solver.formulation == Formulation::raw && cfg.kind != ExperimentKind::positivity &&
      cfg.kind != ExperimentKind::evolve)
    issues.push_back("raw formulation is only meaningful for evolve/positivity experiments");
  if (grid_ok && cfg.solver.dt > 0.0) {
    const double A_eff = cfg.solver.formulation == Formulation::raw ? 0.0 : cfg.A;
    const double bound = dt_stability_bound(g, A_eff);
    if (cfg.solver.dt > bound * (1.0 + 1e-9))
      issues.push_back("solver.dt exceeds the stability bound " + std::to_string(bound));
  }

  switch (cfg.kind) {
    case ExperimentKind::decay: {
      if (!(cfg.A < 1.0)) issues.push_back("decay probe requires A < 1");
      if (!(cfg.probe.q >= 1.0)) issues.push_back("probe.q must be >= 1");
      if (!(cfg.probe.p >= cfg.probe.q)) issues.push_back("probe requires q <= p");
      if (cfg.probe.times.empty()) {
        if (cfg.probe.count < 4) issues.push_back("probe.count must be >= 4");
        if (!(cfg.probe.t_min > 0.0 && cfg.probe.t_max > cfg.probe.t_min))
          issues.push_back("probe window requires 0 < t_min < t_max");
      } else {
        for (std::size_t i = 0; i < cfg.probe.times.size(); ++i) {
          if (!(cfg.probe.times[i] > 0.0) || (i > 0 && cfg.probe.times[i] <= cfg.probe.times[i - 1])) {
            issues.push_back("probe.times must be positive and strictly increasing");
            break;
          }
        }
      }
      break;
    }
    case ExperimentKind::growth:
      if (!(cfg.A > 1.0)) issues.push_back("growth experiment requires A > 1");
      if (!(cfg.fit.tolerance > 0.0)) issues.push_back("fit.tolerance must be positive");
      break;
    case ExperimentKind::delta_sweep: {
      if (!(cfg.A > 1.0)) issues.push_back("delta sweep requires A > 1");
      if (cfg.delta_list.size() < 2) issues.push_back("delta_list needs at least 2 values");
      double lo = 1e300, hi = 0.0;
      bool pos = true;
      for (double d : cfg.delta_list) {
        if (!(d > 0.0)) pos = false;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (!pos) issues.push_back("delta_list values must be positive");
      else if (std::log10(hi / lo) < 2.0 - 1e-9)
        issues.push_back("delta_list must span at least two decades");
      if (!(cfg.target_amplitude > 0.0)) issues.push_back("target_amplitude must be positive");
      else if (cfg.A > 0.0 && cfg.target_amplitude > 0.1 * cfg.A)
        issues.push_back("target_amplitude must stay in the weakly nonlinear range (<= 0.1*A)");
      break;
    }
    case ExperimentKind::picard:
      if (cfg.picard_max_iter < 1) issues.push_back("picard_max_iter must be >= 1");
      if (cfg.picard_substeps < 2) issues.push_back("picard_substeps must be >= 2");
      break;
    case ExperimentKind::positivity:
      if (cfg.A != 0.0) issues.push_back("positivity experiment runs the raw formulation (A must be 0)");
      if (in.amplitude < 0.0 || (in.type == InitialData::Type::constant && in.value < 0.0))
        issues.push_back("positivity experiment requires nonnegative initial data");
      break;
    case ExperimentKind::norms_suite: {
      if (cfg.dim != 1) {
        issues.push_back("norms suite takes a one-dimensional grid (it builds its own 2d grid)");
      } else if (grid_ok) {
        const double L = g.extent[0];
        if (std::abs(L - std::round(L)) > 1e-9)
          issues.push_back("norms suite requires an integer box side (cube lattice must tile the box)");
      }
      if (cfg.suite_fields_1d < 1 || cfg.suite_fields_2d < 0)
        issues.push_back("suite field counts must be positive");
      break;
    }
    case ExperimentKind::dispersion:
    case ExperimentKind::evolve:
      break;
  }

  if (cfg.uloc_p > 0.0) {
    if (cfg.uloc_p < 1.0) issues.push_back("uloc_p must be >= 1 when requested");
    if (grid_ok && 1.0 >= 0.25 * g.extent[0])
      issues.push_back("uloc window of radius 1 requires extent > 4");
  }

  if (!issues.empty()) throw ConfigError(issues);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = kind_name(c.kind);
  j["grid"] = {{"dim", c.dim},
               {"extent", c.dim == 2 ? json::array({c.extent[0], c.extent[1]}) : json(c.extent[0])},
               {"points", c.dim == 2 ? json::array({c.points[0], c.points[1]}) : json(c.points[0])}};
  j["A"] = c.A;
  j["initial"] = {{"type", initial_type_name(c.initial.type)}, {"amplitude", c.initial.amplitude},
                  {"width", c.initial.width},                  {"center", c.initial.center},
                  {"k", c.initial.k},                          {"period", c.initial.period},
                  {"value", c.initial.value},                  {"corr_length", c.initial.corr_length}};
  j["solver"] = {{"formulation", c.solver.formulation == Formulation::raw ? "raw" : "perturbation"},
                 {"scheme", c.solver.scheme == Scheme::etd1 ? "etd1" : "etd_rk2"},
                 {"dt", c.solver.dt},
                 {"horizon", c.solver.horizon},
                 {"dealias", c.solver.dealias},
                 {"positivity_tol", c.solver.positivity_tol},
                 {"blowup_threshold", c.solver.blowup_threshold},
                 {"record_stride", c.solver.record_stride},
                 {"save_stride", c.solver.save_stride}};
  j["fit"] = {{"t_min", c.fit.t_min}, {"t_max", c.fit.t_max}, {"tolerance", c.fit.tolerance}};
  j["probe"] = {{"p", std::isinf(c.probe.p) ? json("inf") : json(c.probe.p)},
                {"q", c.probe.q},
                {"times", c.probe.times},
                {"count", c.probe.count},
                {"t_min", c.probe.t_min},
                {"t_max", c.probe.t_max}};
  j["seed"] = c.seed;
  if (!c.delta_list.empty()) j["delta_list"] = c.delta_list;
  if (c.target_amplitude > 0.0) j["target_amplitude"] = c.target_amplitude;
  j["picard_max_iter"] = c.picard_max_iter;
  j["picard_substeps"] = c.picard_substeps;
  if (c.uloc_p > 0.0) j["uloc_p"] = c.uloc_p;
  if (c.kind == ExperimentKind::norms_suite) {
    j["suite_fields_1d"] = c.suite_fields_1d;
    j["suite_fields_2d"] = c.suite_fields_2d;
  }
  return j;
}

}  // namespace kslab::lab
