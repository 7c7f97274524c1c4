#include "kslab/lab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "kslab/kernels.hpp"
#include "kslab/linsemi.hpp"
#include "kslab/random.hpp"
#include "kslab/solver.hpp"

namespace kslab::lab {

namespace fs = std::filesystem;
using nlohmann::json;

RealField build_initial(const ExperimentConfig& cfg) {
  const Grid g = cfg.grid();
  const auto& in = cfg.initial;
  RealField f = make_field(g);
  const double c0 = in.center >= 0.0 ? in.center : 0.5 * g.extent[0];
  const double c1 = g.dim == 2 ? 0.5 * g.extent[1] : 0.0;
  const int n0 = g.points[0];
  const int n1 = g.dim == 2 ? g.points[1] : 1;

  switch (in.type) {
    case InitialData::Type::gaussian: {
      for (int i0 = 0; i0 < n0; ++i0) {
        const double dx0 = g.node(0, i0) - c0;
        for (int i1 = 0; i1 < n1; ++i1) {
          double r2 = dx0 * dx0;
          if (g.dim == 2) {
            const double dx1 = g.node(1, i1) - c1;
            r2 += dx1 * dx1;
          }
          f.values[static_cast<std::size_t>(i0) * n1 + i1] =
              in.amplitude * std::exp(-r2 / (2.0 * in.width * in.width));
        }
      }
      return f;
    }
    case InitialData::Type::packet: {
      const double k = in.k > 0.0 ? in.k : peak_wavenumber(cfg.A);
      for (int i0 = 0; i0 < n0; ++i0) {
        const double dx0 = g.node(0, i0) - c0;
        for (int i1 = 0; i1 < n1; ++i1) {
          double r2 = dx0 * dx0;
          if (g.dim == 2) {
            const double dx1 = g.node(1, i1) - c1;
            r2 += dx1 * dx1;
          }
          f.values[static_cast<std::size_t>(i0) * n1 + i1] =
              in.amplitude * std::exp(-r2 / (2.0 * in.width * in.width)) * std::cos(k * dx0);
        }
      }
      const double mean = spatial_mean(f);
      for (auto& v : f.values) v -= mean;
      return f;
    }
    case InitialData::Type::comb: {
      if (g.dim != 1) throw std::invalid_argument("comb initial data is one-dimensional");
      const long nbumps = std::lround(std::floor(g.extent[0] / in.period));
      for (int i = 0; i < n0; ++i) {
        const double x = g.node(0, i);
        double acc = 0.0;
        for (long m = 0; m < nbumps; ++m) {
          const double cm = (m + 0.5) * in.period;
          double d = x - cm;
          d -= g.extent[0] * std::round(d / g.extent[0]);
          acc += std::exp(-d * d / (2.0 * in.width * in.width));
        }
        f.values[i] = in.amplitude * acc;
      }
      return f;
    }
    case InitialData::Type::constant: {
      for (auto& v : f.values) v = in.value;
      return f;
    }
    case InitialData::Type::random_smooth: {
      SplitRng rng = SplitRng(cfg.seed).split("initial");
      return random_smooth_field(g, rng, in.corr_length, in.amplitude);
    }
  }
  return f;
}

namespace {

CheckResult make_check(std::string name, double measured, double reference, double tolerance,
                       bool pass, std::string detail = "") {
  return CheckResult{std::move(name), pass, measured, reference, tolerance, std::move(detail)};
}

CheckResult abs_check(std::string name, double measured, double reference, double tolerance,
                      std::string detail = "") {
  const bool pass = std::abs(measured - reference) <= tolerance;
  return make_check(std::move(name), measured, reference, tolerance, pass, std::move(detail));
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

// Effective solver config for an experiment: the experiment's A rides along,
// and positivity runs the raw formulation.
SolverConfig solver_for(const ExperimentConfig& cfg) {
  SolverConfig s = cfg.solver;
  if (cfg.kind == ExperimentKind::positivity) s.formulation = Formulation::raw;
  s.A = s.formulation == Formulation::raw ? 0.0 : cfg.A;
  return s;
}

ExtraNorm uloc_extra(const ExperimentConfig& cfg) {
  if (cfg.uloc_p <= 0.0) return {};
  const NormSpec spec{cfg.uloc_p, 1.0, WindowShape::ball, 1};
  return [spec](const RealField& f) { return uloc_norm(f, spec); };
}

double first_crossing_time(const std::vector<NormSample>& series, double target,
                           double NormSample::* column) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double v = series[i].*column;
    if (v >= target) {
      if (i == 0) return series[0].t;
      const double v0 = series[i - 1].*column;
      if (v0 > 0.0 && v > v0) {
        // interpolate on the log ordinate
        const double w = (std::log(target) - std::log(v0)) / (std::log(v) - std::log(v0));
        return series[i - 1].t + w * (series[i].t - series[i - 1].t);
      }
      return series[i].t;
    }
  }
  return -1.0;
}

void run_dispersion(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const Grid g = cfg.grid();
  const double a = spectral_abscissa(cfg.A);

  // brute-force scan of the continuum rate over |k| in (0, 10], step 1e-5
  double scan_max = -1e300;
  double scan_argmax = 0.0;
  const double step = 1e-5;
  for (long i = 1; i <= 1000000; ++i) {
    const double k = i * step;
    const double r = dispersion_rate(cfg.A, k);
    if (r > scan_max) {
      scan_max = r;
      scan_argmax = k;
    }
  }
  scan_max = std::max(scan_max, 0.0);  // rate at k -> 0 is 0

  const SemigroupSymbol sym(cfg.A, g);
  const double lattice_max = sym.lattice_max_rate();

  rep.reference["abscissa_formula"] = a;
  rep.measured["scan_max_rate"] = scan_max;
  rep.measured["scan_argmax"] = scan_argmax;
  rep.measured["lattice_max_rate"] = lattice_max;

  rep.checks.push_back(abs_check("abscissa matches brute-force scan", scan_max, a, 1e-8));
  rep.checks.push_back(make_check("lattice max rate does not exceed the abscissa", lattice_max, a,
                                  1e-12, lattice_max <= a + 1e-12));

  if (cfg.A > 1.0) {
    const double kstar = peak_wavenumber(cfg.A);
    rep.reference["peak_wavenumber_formula"] = kstar;
    const double ks2 = kstar * kstar;
    const double opk = 1.0 + ks2;
    const double hpp = 2.0 - 2.0 * cfg.A / (opk * opk) + 8.0 * cfg.A * ks2 / (opk * opk * opk);
    const double dk = 2.0 * std::numbers::pi / g.extent[0];
    const double eps_grid = std::abs(hpp) * dk * dk;
    rep.measured["eps_grid"] = eps_grid;
    if (kstar < g.max_wavenumber()) {
      rep.checks.push_back(make_check("lattice max rate within eps_grid of the abscissa",
                                      lattice_max, a, eps_grid, a - lattice_max <= eps_grid));
    }
  }

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "dispersion_curve.csv");
    std::ofstream out(path);
    out << "k,rate\n";
    const double dk = 2.0 * std::numbers::pi / g.extent[0];
    for (int m = 0; m < g.points[0] / 2; ++m) {
      const double k = m * dk;
      out << format_real(k) << ',' << format_real(dispersion_rate(cfg.A, k)) << "\n";
    }
    rep.artifacts["dispersion_curve"] = path;
  }
}

void run_decay(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const RealField v0 = build_initial(cfg);
  const std::vector<double> times = cfg.probe.times.empty()
                                        ? log_spaced(cfg.probe.t_min, cfg.probe.t_max, cfg.probe.count)
                                        : cfg.probe.times;
  const auto probe = semigroup_decay_probe(cfg.A, cfg.probe.p, cfg.probe.q, v0, times);

  const double n = cfg.dim;
  const double invq = std::isinf(cfg.probe.q) ? 0.0 : 1.0 / cfg.probe.q;
  const double invp = std::isinf(cfg.probe.p) ? 0.0 : 1.0 / cfg.probe.p;
  const double ref = -0.5 * n * (invq - invp);

  rep.measured["fitted_exponent"] = probe.fit.exponent;
  rep.measured["fit_residual"] = probe.fit.residual;
  rep.measured["samples_used"] = probe.used;
  rep.measured["max_boundary_fraction"] = probe.max_boundary_fraction;
  rep.reference["decay_exponent"] = ref;
  rep.checks.push_back(
      abs_check("fitted decay exponent matches the rate formula", probe.fit.exponent, ref,
                cfg.fit.tolerance));

  // Fitted exponents for a small table of (data norm, measured norm) pairs; rows
  // satisfying data <= n < measured <= 2*data are the ones covered by the
  // global-existence decay statement, the rest are reported for context.
  if (cfg.dim == 1) {
    json table = json::array();
    struct Row {
      double data_norm, measured_norm;
      double NormSample::* col;
    };
    const Row rows[] = {{1.0, 1.0, &NormSample::l1},
                        {1.0, 2.0, &NormSample::l2},
                        {1.0, inf_p, &NormSample::linf},
                        {2.0, 2.0, &NormSample::l2},
                        {2.0, inf_p, &NormSample::linf}};
    for (const auto& r : rows) {
      std::vector<double> vals;
      vals.reserve(probe.series.size());
      for (const auto& s : probe.series) vals.push_back(s.*(r.col));
      const auto fit = fit_power_law(probe.times, vals, probe.times.front() * (1 - 1e-12),
                                     probe.times.back() * (1 + 1e-12));
      const double iq = 1.0 / r.data_norm;
      const double ip = std::isinf(r.measured_norm) ? 0.0 : 1.0 / r.measured_norm;
      const bool admissible = r.data_norm <= n && r.measured_norm > n && r.measured_norm <= 2.0 * r.data_norm;
      table.push_back({{"data_norm", r.data_norm},
                       {"measured_norm", std::isinf(r.measured_norm) ? json("inf") : json(r.measured_norm)},
                       {"fitted", fit.exponent},
                       {"reference", -0.5 * n * (iq - ip)},
                       {"admissible", admissible}});
    }
    rep.measured["exponent_table"] = table;
  }

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "series.csv");
    write_series_csv(path, probe.series);
    rep.artifacts["series"] = path;
  }
}

void run_growth(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const double a = spectral_abscissa(cfg.A);
  const double kstar = peak_wavenumber(cfg.A);
  const RealField v0 = build_initial(cfg);
  const Trajectory traj = evolve(v0, solver_for(cfg), uloc_extra(cfg));

  const double ceiling = 0.1 * cfg.A;
  double t_end = traj.end_time;
  for (const auto& s : traj.series) {
    if (s.linf > ceiling) {
      t_end = s.t;
      break;
    }
  }
  const double t_lo = cfg.fit.t_min >= 0.0 ? cfg.fit.t_min : 0.2 * t_end;
  const double t_hi = cfg.fit.t_max >= 0.0 ? std::min(cfg.fit.t_max, t_end) : t_end;

  std::vector<double> ts, l2s;
  for (const auto& s : traj.series) {
    ts.push_back(s.t);
    l2s.push_back(s.l2);
  }
  const RateFit fit = fit_exponential(ts, l2s, t_lo, t_hi);

  rep.reference["abscissa"] = a;
  rep.reference["peak_wavenumber"] = kstar;
  rep.measured["fitted_rate"] = fit.exponent;
  rep.measured["fit_residual"] = fit.residual;
  rep.measured["fit_window"] = {fit.t_min, fit.t_max};
  rep.measured["linf_ceiling"] = ceiling;
  rep.measured["reached_ceiling"] = t_end < traj.end_time;
  const bool pass = std::abs(fit.exponent - a) <= cfg.fit.tolerance * a;
  rep.checks.push_back(make_check("exponential growth rate matches the abscissa", fit.exponent, a,
                                  cfg.fit.tolerance * a, pass,
                                  "fit window [" + format_real(t_lo) + ", " + format_real(t_hi) + "]"));

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "series.csv");
    write_series_csv(path, traj.series, cfg.uloc_p);
    rep.artifacts["series"] = path;
  }
}

void run_delta_sweep(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const Grid g = cfg.grid();
  const double a = spectral_abscissa(cfg.A);
  RealField packet = build_near_eigenmode(g, cfg.A, 1.0, cfg.initial.width);
  const double pnorm = lp_norm(packet, 2.0);
  for (auto& v : packet.values) v /= pnorm;  // unit L2

  json runs = json::array();
  std::vector<double> xs, ys;
  bool all_reached = true;
  int excluded = 0;
  for (std::size_t i = 0; i < cfg.delta_list.size(); ++i) {
    const double delta = cfg.delta_list[i];
    RealField v0{g, packet.values};
    for (auto& v : v0.values) v *= delta;
    SolverConfig sc = solver_for(cfg);
    // stop shortly after the expected crossing; past it the run only feeds the
    // strongly nonlinear regime
    const double t_est = std::log(cfg.target_amplitude / delta) / a;
    sc.horizon = std::min(sc.horizon, 1.25 * t_est + 2.0);
    const Trajectory traj = evolve(v0, sc, uloc_extra(cfg));
    const double t_hit = first_crossing_time(traj.series, cfg.target_amplitude, &NormSample::l2);
    const bool blew_up_first =
        traj.outcome == RunOutcome::blowup && (t_hit < 0.0 || traj.blowup_time < t_hit);
    const bool reached = t_hit >= 0.0 && !blew_up_first;
    json entry = {{"delta", delta},
                  {"t_hit", t_hit},
                  {"reached", reached},
                  {"terminal_l2", traj.series.back().l2}};
    if (blew_up_first) {
      entry["note"] = "blow-up before reaching the target; excluded from the regression";
      ++excluded;
    } else if (reached) {
      xs.push_back(std::log(1.0 / delta));
      ys.push_back(t_hit);
    } else {
      all_reached = false;
    }
    runs.push_back(entry);
    if (!out_dir.empty()) {
      const std::string path = join_path(out_dir, "series_" + std::to_string(i) + ".csv");
      write_series_csv(path, traj.series, cfg.uloc_p);
      rep.artifacts["series_" + std::to_string(i)] = path;
    }
  }
  rep.measured["runs"] = runs;
  rep.measured["excluded_blowups"] = excluded;
  rep.reference["abscissa"] = a;
  rep.reference["inverse_abscissa"] = 1.0 / a;

  rep.checks.push_back(make_check("every perturbation size reaches the target amplitude",
                                  all_reached ? 1.0 : 0.0, 1.0, 0.0, all_reached,
                                  excluded ? std::to_string(excluded) + " run(s) excluded (blow-up)" : ""));

  if (xs.size() >= 2) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
    }
    const double mx = sx / xs.size(), my = sy / ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    rep.measured["escape_slope"] = slope;
    rep.measured["fitted_rate"] = 1.0 / slope;
    rep.checks.push_back(abs_check("escape-time slope matches 1/a", slope, 1.0 / a,
                                   cfg.fit.tolerance / a));
  } else {
    rep.checks.push_back(make_check("escape-time regression has enough points",
                                    static_cast<double>(xs.size()), 2.0, 0.0, false));
  }

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "sweep.csv");
    std::ofstream out(path);
    out << "delta,t_hit,reached,terminal_l2\n";
    for (const auto& r : runs) {
      out << format_real(r.at("delta").get<double>()) << ',' << format_real(r.at("t_hit").get<double>())
          << ',' << (r.at("reached").get<bool>() ? 1 : 0) << ','
          << format_real(r.at("terminal_l2").get<double>()) << "\n";
    }
    rep.artifacts["sweep"] = path;
  }
}

void run_picard(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const RealField v0 = build_initial(cfg);
  const double T = cfg.solver.horizon;
  const PicardResult pr =
      picard_solve(cfg.A, v0, T, cfg.picard_max_iter, cfg.picard_substeps, 2.0, cfg.solver.dealias);

  SolverConfig sc = solver_for(cfg);
  sc.dt = cfg.solver.dt > 0.0 ? cfg.solver.dt : T / 1000.0;
  sc.record_stride = 1 << 28;  // endpoints only
  const Trajectory traj = evolve(v0, sc);
  const RealField& etd_final = traj.snapshots.back();

  const double ref_norm = lp_norm(etd_final, 2.0);
  const double rel = ref_norm > 0.0 ? l2_distance(pr.final_state, etd_final) / ref_norm : 0.0;

  rep.measured["distances"] = pr.distances;
  rep.measured["ratios"] = pr.ratios;
  rep.measured["contractive"] = pr.contractive;
  rep.measured["converged"] = pr.converged;
  rep.measured["etd_relative_l2_gap"] = rel;

  double worst_ratio = 0.0;
  for (double r : pr.ratios) worst_ratio = std::max(worst_ratio, r);
  rep.checks.push_back(make_check("successive-iterate ratios stay below 0.5", worst_ratio, 0.5, 0.0,
                                  worst_ratio <= 0.5 || pr.ratios.empty()));
  rep.checks.push_back(make_check("fixed point matches the ETD trajectory at t = T", rel, 0.0, 1e-4,
                                  rel <= 1e-4));

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "picard.csv");
    std::ofstream out(path);
    out << "iteration,distance,ratio\n";
    for (std::size_t i = 0; i < pr.distances.size(); ++i) {
      out << (i + 1) << ',' << format_real(pr.distances[i]) << ','
          << (i >= 1 ? format_real(pr.ratios[i - 1]) : "") << "\n";
    }
    rep.artifacts["picard"] = path;
    const std::string spath = join_path(out_dir, "series.csv");
    write_series_csv(spath, traj.series);
    rep.artifacts["series"] = spath;
  }
}

void run_positivity(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const RealField u0 = build_initial(cfg);
  rep.measured["initial_min"] = field_min(u0);
  const Trajectory traj = evolve(u0, solver_for(cfg), uloc_extra(cfg));
  const PositivityReport pos = check_positivity(traj, cfg.solver.positivity_tol);

  rep.measured["worst_min"] = pos.worst_min;
  rep.measured["violations"] = pos.violations.size();
  rep.reference["threshold"] = pos.threshold;
  rep.checks.push_back(make_check("minimum stays above -tol * sup|u0|", pos.worst_min, pos.threshold,
                                  0.0, pos.pass));
  if (!pos.violations.empty()) {
    json v = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(10, pos.violations.size()); ++i) {
      v.push_back({{"t", pos.violations[i].t},
                   {"index", pos.violations[i].index},
                   {"value", pos.violations[i].value}});
    }
    rep.measured["violation_samples"] = v;
  }

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "series.csv");
    write_series_csv(path, traj.series, cfg.uloc_p);
    rep.artifacts["series"] = path;
  }
}

void run_norms_suite(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string&) {
  SplitRng root(cfg.seed);
  const Grid g1 = cfg.grid();
  int sandwich_fail = 0;

  // cube/ball sandwich, 1D, random smooth fields of varying roughness and p
  {
    SplitRng rng = root.split("sandwich-1d");
    const double ps[] = {1.0, 2.0, 3.0, inf_p};
    for (int i = 0; i < cfg.suite_fields_1d; ++i) {
      const double corr = 0.2 + 2.0 * rng.uniform();
      const RealField f = random_smooth_field(g1, rng, corr, 1.0 + rng.uniform());
      if (!check_cube_ball_sandwich(f, ps[i % 4]).pass) ++sandwich_fail;
    }
    // adversarial: bump concentrated at a cube corner
    RealField corner = make_field(g1);
    for (int i = 0; i < g1.points[0]; ++i) {
      const double d = g1.node(0, i) - 0.5;
      corner.values[i] = std::exp(-d * d / (2.0 * 0.04));
    }
    if (!check_cube_ball_sandwich(corner, 2.0).pass) ++sandwich_fail;
  }
  int sandwich2_fail = 0;
  if (cfg.suite_fields_2d > 0) {
    const Grid g2 = make_grid(2, 16.0, 128);
    SplitRng rng = root.split("sandwich-2d");
    for (int i = 0; i < cfg.suite_fields_2d; ++i) {
      const double corr = 0.3 + 1.5 * rng.uniform();
      const RealField f = random_smooth_field(g2, rng, corr, 1.0 + rng.uniform());
      if (!check_cube_ball_sandwich(f, i % 2 ? 1.0 : 2.0).pass) ++sandwich2_fail;
    }
  }
  rep.checks.push_back(make_check("cube/ball sandwich (1d random + corner bump)",
                                  sandwich_fail, 0.0, 0.0, sandwich_fail == 0));
  rep.checks.push_back(make_check("cube/ball sandwich (2d random)", sandwich2_fail, 0.0, 0.0,
                                  sandwich2_fail == 0));

  // Young-type inequality for grad K convolution on the uloc scale, 1D
  {
    SplitRng rng = root.split("young");
    int fails = 0;
    double worst_emp = 0.0;
    const double triples[][3] = {{2.0, 2.0, 1.0}, {inf_p, 2.0, 2.0}, {2.0, 1.0, 2.0}};
    for (int i = 0; i < 100; ++i) {
      const RealField f = random_smooth_field(g1, rng, 0.3 + 2.0 * rng.uniform(), 1.0);
      const auto& tr = triples[i % 3];
      const auto yr = check_young_uloc(f, tr[0], tr[1], tr[2]);
      if (!yr.pass) ++fails;
      worst_emp = std::max(worst_emp, yr.empirical_c);
    }
    rep.measured["young_worst_empirical_c"] = worst_emp;
    rep.checks.push_back(make_check("uloc Young inequality with the proof constant", fails, 0.0,
                                    0.0, fails == 0));
    rep.checks.push_back(make_check("uloc Young empirical constant <= 3", worst_emp, 3.0, 0.0,
                                    worst_emp <= 3.0));
  }

  // heat-semigroup uloc contraction at C = 1, plus the smoothing-case constant
  {
    SplitRng rng = root.split("heat");
    int fails = 0;
    const double ps[] = {1.0, 2.0, inf_p};
    const double ts[] = {0.1, 1.0, 10.0};
    for (int i = 0; i < 30; ++i) {
      const RealField f = random_smooth_field(g1, rng, 0.3 + 1.5 * rng.uniform(), 1.0);
      for (double p : ps)
        for (double t : ts) {
          if (!heat_uloc_spotcheck(f, p, p, t).pass) ++fails;
        }
    }
    double emp = 0.0;
    for (int i = 0; i < 50; ++i) {
      const RealField f = random_smooth_field(g1, rng, 0.3 + 1.5 * rng.uniform(), 1.0);
      emp = std::max(emp, heat_uloc_spotcheck(f, inf_p, 1.0, 1.0).empirical_c);
    }
    rep.measured["heat_linf_l1_empirical_c"] = emp;
    rep.checks.push_back(make_check("uloc heat contraction with C = 1 (slack 1e-9)", fails, 0.0,
                                    0.0, fails == 0));
    rep.checks.push_back(make_check("uloc heat smoothing constant is finite", emp, 0.0, 0.0,
                                    std::isfinite(emp) && emp > 0.0));
  }

  // uloc <= global lp; window-radius monotonicity and two-sided equivalence
  {
    SplitRng rng = root.split("uloc-lp");
    int fails = 0;
    for (int i = 0; i < 50; ++i) {
      const RealField f = random_smooth_field(g1, rng, 0.3 + 1.5 * rng.uniform(), 1.0);
      for (double p : {1.0, 2.0}) {
        const double u = uloc_norm(f, NormSpec{p, 1.0, WindowShape::ball, 1});
        if (u > lp_norm(f, p) * (1.0 + 1e-12)) ++fails;
        const double us = uloc_norm(f, NormSpec{p, 0.5, WindowShape::ball, 1});
        const double ul = uloc_norm(f, NormSpec{p, 1.5, WindowShape::ball, 1});
        if (us > ul * (1.0 + 1e-12)) ++fails;
        // cover a radius-1.5 window by 5 radius-0.5 windows centered on nodes
        if (ul > std::pow(5.0, 1.0 / p) * us * (1.0 + 1e-9)) ++fails;
      }
    }
    rep.checks.push_back(make_check("uloc norm ordering and radius equivalence", fails, 0.0, 0.0,
                                    fails == 0));
  }

  // comb of identical bumps: the uloc norm sees one window, the global norm the box
  {
    ExperimentConfig comb_cfg = cfg;
    comb_cfg.initial.type = InitialData::Type::comb;
    comb_cfg.initial.amplitude = 1.0;
    comb_cfg.initial.width = 0.3;
    comb_cfg.initial.period = 4.0;
    const RealField comb = build_initial(comb_cfg);
    RealField bump = make_field(g1);
    const double c = 0.5 * comb_cfg.initial.period;
    for (int i = 0; i < g1.points[0]; ++i) {
      const double d = g1.node(0, i) - c;
      bump.values[i] = std::exp(-d * d / (2.0 * 0.09));
    }
    const double uc = uloc_norm(comb, NormSpec{2.0, 1.0, WindowShape::ball, 1});
    const double ub = lp_norm(bump, 2.0);
    const double gc = lp_norm(comb, 2.0);
    rep.measured["comb_uloc"] = uc;
    rep.measured["single_bump_l2"] = ub;
    rep.measured["comb_l2"] = gc;
    rep.checks.push_back(make_check("comb uloc norm equals the one-bump norm (2%)", uc, ub,
                                    0.02 * ub, std::abs(uc - ub) <= 0.02 * ub));
    rep.checks.push_back(make_check("comb global norm exceeds the one-bump norm", gc, 2.0 * ub,
                                    0.0, gc > 2.0 * ub));
  }
}

void run_evolve(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& out_dir) {
  const RealField f0 = build_initial(cfg);
  const Trajectory traj = evolve(f0, solver_for(cfg), uloc_extra(cfg));
  const BlowupStatus bs = detect_blowup(traj);

  rep.measured["end_time"] = traj.end_time;
  rep.measured["outcome"] = traj.outcome == RunOutcome::blowup ? "blowup" : "completed";
  rep.measured["classification"] = bs.kind == BlowupStatus::Kind::global      ? "global"
                                   : bs.kind == BlowupStatus::Kind::blowup    ? "blowup"
                                                                              : "indeterminate";
  if (bs.kind == BlowupStatus::Kind::blowup) rep.measured["t_star"] = bs.t_star;
  rep.measured["final_l2"] = traj.series.back().l2;
  rep.measured["final_linf"] = traj.series.back().linf;
  rep.measured["max_mean_drift"] = traj.max_mean_drift;

  if (solver_for(cfg).formulation == Formulation::raw && field_min(f0) >= 0.0) {
    const PositivityReport pos = check_positivity(traj, cfg.solver.positivity_tol);
    rep.measured["worst_min"] = pos.worst_min;
    rep.checks.push_back(make_check("minimum stays above -tol * sup|u0|", pos.worst_min,
                                    pos.threshold, 0.0, pos.pass));
  }

  if (!out_dir.empty()) {
    const std::string path = join_path(out_dir, "series.csv");
    write_series_csv(path, traj.series, cfg.uloc_p);
    rep.artifacts["series"] = path;
  }
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.name = cfg.name;
  rep.kind = kind_name(cfg.kind);
  rep.config_echo = to_json(cfg);
  rep.measured = json::object();
  rep.reference = json::object();

  if (!out_dir.empty()) fs::create_directories(out_dir);

  switch (cfg.kind) {
    case ExperimentKind::dispersion: run_dispersion(cfg, rep, out_dir); break;
    case ExperimentKind::decay: run_decay(cfg, rep, out_dir); break;
    case ExperimentKind::growth: run_growth(cfg, rep, out_dir); break;
    case ExperimentKind::delta_sweep: run_delta_sweep(cfg, rep, out_dir); break;
    case ExperimentKind::picard: run_picard(cfg, rep, out_dir); break;
    case ExperimentKind::positivity: run_positivity(cfg, rep, out_dir); break;
    case ExperimentKind::norms_suite: run_norms_suite(cfg, rep, out_dir); break;
    case ExperimentKind::evolve: run_evolve(cfg, rep, out_dir); break;
  }

  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!out_dir.empty()) write_report_json(join_path(out_dir, "report.json"), rep);

  if (!quiet) {
    std::cout << rep.name << " (" << rep.kind << ")\n";
    for (const auto& c : rep.checks) {
      std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
                << " (measured=" << format_real(c.measured) << ", reference=" << format_real(c.reference)
                << ", tolerance=" << format_real(c.tolerance) << ")"
                << (c.detail.empty() ? "" : " " + c.detail) << "\n";
    }
  }
  return rep;
}

}  // namespace kslab::lab
