#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kslab/grid.hpp"
#include "kslab/linsemi.hpp"
#include "kslab/norms.hpp"
#include "kslab/random.hpp"

using namespace kslab;

namespace {
constexpr double pi = std::numbers::pi;

// Independent oracle: maximize the dispersion rate over a fine scan of |k|.
struct ScanResult {
  double max_rate;
  double argmax;
};
ScanResult scan_dispersion(double A, double kmax = 4.0, double step = 1e-5) {
  ScanResult r{0.0, 0.0};  // rate -> 0 as k -> 0
  for (long i = 1; i * step <= kmax; ++i) {
    const double k = i * step;
    const double rate = dispersion_rate(A, k);
    if (rate > r.max_rate) {
      r.max_rate = rate;
      r.argmax = k;
    }
  }
  return r;
}
}  // namespace

TEST_CASE("dispersion rate values") {
  CHECK(dispersion_rate(3.7, 0.0) == doctest::Approx(0.0));
  CHECK(dispersion_rate(0.0, 1.3) == doctest::Approx(-1.3 * 1.3).epsilon(1e-15));
  // A = 4, |k| = 1: -1 + 4/2 = 1, which is also the abscissa
  CHECK(dispersion_rate(4.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dispersion_rate(4.0, 1.0) == doctest::Approx(spectral_abscissa(4.0)).epsilon(1e-15));
}

TEST_CASE("spectral abscissa: formula, boundary, negative backgrounds") {
  CHECK(spectral_abscissa(4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spectral_abscissa(2.0) == doctest::Approx(0.1715729).epsilon(1e-6));
  CHECK(spectral_abscissa(9.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(spectral_abscissa(1.0) == 0.0);
  CHECK(spectral_abscissa(0.5) == 0.0);
  CHECK(spectral_abscissa(-3.0) == 0.0);
  // scan oracle agreement
  for (double A : {1.5, 2.0, 4.0}) {
    CHECK(std::abs(scan_dispersion(A).max_rate - spectral_abscissa(A)) <= 1e-8);
  }
}

TEST_CASE("peak wavenumber: maximizer of the dispersion rate") {
  CHECK(peak_wavenumber(4.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(peak_wavenumber(2.0) == doctest::Approx(0.6435943).epsilon(1e-6));
  CHECK(std::abs(peak_wavenumber(2.0) - scan_dispersion(2.0).argmax) <= 1e-5);
  CHECK(dispersion_rate(2.0, peak_wavenumber(2.0)) ==
        doctest::Approx(spectral_abscissa(2.0)).epsilon(1e-12));
  // near-degenerate threshold
  CHECK(peak_wavenumber(1.0001) == doctest::Approx(0.00707).epsilon(1e-3));
  CHECK(spectral_abscissa(1.0001) == doctest::Approx(2.5e-9).epsilon(1e-3));
  CHECK_THROWS_AS(peak_wavenumber(1.0), std::invalid_argument);
  CHECK_THROWS_AS(peak_wavenumber(0.5), std::invalid_argument);
}

TEST_CASE("semigroup symbol: h(0) = 0 and the lattice sign dichotomy") {
  const Grid g = make_grid(1, 64.0 * pi, 512);
  for (double A : {-1.0, 0.5, 1.0}) {
    const SemigroupSymbol sym(A, g);
    CHECK(sym.h[0] == 0.0);
    CHECK(sym.lattice_max_rate() <= 0.0 + 1e-15);
  }
  const SemigroupSymbol sym2(2.0, g);
  const double a = spectral_abscissa(2.0);
  const double dk = 2.0 * pi / g.extent[0];
  CHECK(sym2.lattice_max_rate() <= a + 1e-12);
  CHECK(sym2.lattice_max_rate() >= a - 4.0 * dk * dk);  // |h''| <= 4 near the peak
}

TEST_CASE("apply_semigroup: identity at t = 0, exact single-mode factors") {
  const Grid g = make_grid(1, 16.0 * pi, 256);
  SplitRng rng(3);
  const RealField v = random_smooth_field(g, rng, 0.7, 1.0);
  CHECK(sup_distance(apply_semigroup(2.0, 0.0, v), v) <= 1e-13);
  CHECK_THROWS_AS(apply_semigroup(2.0, -0.5, v), std::invalid_argument);

  const double k = 12.0 * 2.0 * pi / g.extent[0];
  RealField mode = make_field(g);
  for (int i = 0; i < g.points[0]; ++i) mode.values[i] = std::cos(k * g.node(0, i));
  for (double A : {0.5, 2.0}) {
    const RealField out = apply_semigroup(A, 0.8, mode);
    const double factor = std::exp(0.8 * dispersion_rate(A, k));
    double worst = 0.0;
    for (int i = 0; i < g.points[0]; ++i)
      worst = std::max(worst, std::abs(out.values[i] - factor * mode.values[i]));
    CHECK(worst <= 1e-12 * factor);
  }
}

TEST_CASE("semigroup composition and commutation with the gradient") {
  const Grid g = make_grid(1, 16.0 * pi, 256);
  const SemigroupSymbol sym(2.0, g);
  SplitRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const RealField v = random_smooth_field(g, rng, 0.3 + rng.uniform(), 1.0);
    const double s = 2.0 * rng.uniform(), t = 2.0 * rng.uniform();
    const RealField ab = apply_semigroup(sym, s, apply_semigroup(sym, t, v));
    const RealField once = apply_semigroup(sym, s + t, v);
    CHECK(l2_distance(ab, once) <= 1e-11 * lp_norm(v, 2.0));

    const RealField gs = spectral_gradient(apply_semigroup(sym, t, v))[0];
    const RealField sg = apply_semigroup(sym, t, spectral_gradient(v)[0]);
    CHECK(l2_distance(gs, sg) <= 1e-11 * lp_norm(spectral_gradient(v)[0], 2.0));
  }
}

TEST_CASE("gradient semigroup equals gradient of the evolved field") {
  const Grid g = make_grid(1, 16.0 * pi, 256);
  SplitRng rng(6);
  const RealField v = random_smooth_field(g, rng, 0.8, 1.0);
  const auto gs = apply_grad_semigroup(2.0, 0.7, v);
  const RealField direct = spectral_gradient(apply_semigroup(2.0, 0.7, v))[0];
  CHECK(sup_distance(gs[0], direct) <= 1e-12 * std::max(1.0, field_max_abs(direct)));
}

TEST_CASE("A = 1 and A < 1 semigroups never expand the L2 norm") {
  const Grid g = make_grid(1, 32.0, 256);
  SplitRng rng(7);
  for (double A : {1.0, 0.5, -2.0}) {
    const SemigroupSymbol sym(A, g);
    for (int trial = 0; trial < 20; ++trial) {
      const RealField v = random_smooth_field(g, rng, 0.2 + rng.uniform(), 1.0);
      const double n0 = lp_norm(v, 2.0);
      for (double t : {0.1, 1.0, 10.0})
        CHECK(lp_norm(apply_semigroup(sym, t, v), 2.0) <= n0 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("growth upper bound: ||S_A(t)v||_2 <= exp((a + eps) t) ||v||_2 on the lattice") {
  const Grid g = make_grid(1, 64.0 * pi, 512);
  const double A = 4.0;
  const double a = spectral_abscissa(A);
  const double dk = 2.0 * pi / g.extent[0];
  const double eps = 4.0 * dk * dk;
  const SemigroupSymbol sym(A, g);
  SplitRng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const RealField v = random_smooth_field(g, rng, 0.3 + rng.uniform(), 1.0);
    const double n0 = lp_norm(v, 2.0);
    for (double t : {0.5, 2.0, 5.0})
      CHECK(lp_norm(apply_semigroup(sym, t, v), 2.0) <= std::exp((a + eps) * t) * n0 * (1.0 + 1e-12));
  }
}

TEST_CASE("rate fits recover synthetic laws exactly") {
  std::vector<double> ts, alg, expo;
  for (int i = 0; i < 20; ++i) {
    const double t = 2.0 + 3.0 * i;
    ts.push_back(t);
    alg.push_back(3.0 * std::pow(t, -0.7));
    expo.push_back(2.0 * std::exp(0.31 * t));
  }
  const RateFit fa = fit_power_law(ts, alg, 1.0, 100.0);
  CHECK(fa.exponent == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(fa.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fa.residual <= 1e-12);
  const RateFit fe = fit_exponential(ts, expo, 1.0, 100.0);
  CHECK(fe.exponent == doctest::Approx(0.31).epsilon(1e-12));
  CHECK_THROWS_AS(fit_power_law(ts, alg, 5.0, 5.0), std::invalid_argument);
}

TEST_CASE("decay probe in 2d: L1 data, L2 norm, A = 0.9") {
  const Grid g = make_grid(2, 600.0, 512);
  RealField v0 = make_field(g);
  const double s2 = 2.0 * 2.0;
  for (int i0 = 0; i0 < 512; ++i0)
    for (int i1 = 0; i1 < 512; ++i1) {
      const double dx = g.node(0, i0) - 300.0, dy = g.node(1, i1) - 300.0;
      v0.values[static_cast<std::size_t>(i0) * 512 + i1] = std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
    }
  const auto probe = semigroup_decay_probe(0.9, 2.0, 1.0, v0, log_spaced(100.0, 800.0, 12));
  // -(n/2)(1/q - 1/p) = -(2/2)(1 - 1/2) = -1/2
  CHECK(std::abs(probe.fit.exponent - (-0.5)) <= 0.1);
}

TEST_CASE("decay probe rejects bad inputs") {
  const Grid g = make_grid(1, 100.0, 512);
  RealField v0 = make_field(g);
  for (int i = 0; i < 512; ++i) {
    const double d = g.node(0, i) - 50.0;
    v0.values[i] = std::exp(-d * d / 2.0);
  }
  CHECK_THROWS_AS(semigroup_decay_probe(1.5, inf_p, 1.0, v0, log_spaced(1.0, 10.0, 6)),
                  std::invalid_argument);  // A >= 1
  CHECK_THROWS_AS(semigroup_decay_probe(0.5, 1.0, 2.0, v0, log_spaced(1.0, 10.0, 6)),
                  std::invalid_argument);  // q > p
  // spread-out data (here a constant) is not localized in any window
  CHECK_THROWS_AS(semigroup_decay_probe(0.5, inf_p, 1.0, make_field(g, 1.0),
                                        log_spaced(1.0, 10.0, 6)),
                  std::invalid_argument);
}

TEST_CASE("gradient semigroup decay: L1 data gives the sup-norm exponent -(n/2) - 1/2") {
  const Grid g = make_grid(1, 1000.0, 4096);
  RealField v0 = make_field(g);
  for (int i = 0; i < g.points[0]; ++i) {
    const double d = g.node(0, i) - 500.0;
    v0.values[i] = std::exp(-d * d / 2.0);
  }
  const auto times = log_spaced(100.0, 2000.0, 15);
  std::vector<double> sups;
  for (double t : times) sups.push_back(field_max_abs(apply_grad_semigroup(0.5, t, v0)[0]));
  const RateFit fit = fit_power_law(times, sups, 99.0, 2001.0);
  CHECK(std::abs(fit.exponent - (-1.0)) <= 0.05);
}

TEST_CASE("near-eigenmode: growth within gamma of exp(a t)") {
  const Grid big = make_grid(1, 96.0 * pi, 1536);
  // A = 4, width 20, t = 1: relative L2 deviation from exp(a t) v0 below 5%
  {
    const Grid g = make_grid(1, 64.0 * pi, 1024);
    const RealField v0 = build_near_eigenmode(g, 4.0, 1.0, 20.0);
    const RealField st = apply_semigroup(4.0, 1.0, v0);
    RealField diff = st;
    const double gr = std::exp(spectral_abscissa(4.0) * 1.0);
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= gr * v0.values[i];
    CHECK(lp_norm(diff, 2.0) / lp_norm(v0, 2.0) <= 0.05);
  }
  // wider packets concentrate harder: the deviation ratio decreases
  {
    const RealField w20 = build_near_eigenmode(big, 4.0, 1.0, 20.0);
    const RealField w30 = build_near_eigenmode(big, 4.0, 1.0, 30.0);
    auto deviation = [&](const RealField& v) {
      const RealField st = apply_semigroup(4.0, 1.0, v);
      RealField d = st;
      const double gr = std::exp(spectral_abscissa(4.0));
      for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= gr * v.values[i];
      return lp_norm(d, 2.0) / lp_norm(v, 2.0);
    };
    CHECK(deviation(w30) < deviation(w20));
  }
  // A = 2, width 30, t = 2: growth factor within 10% of exp(2a)
  {
    const RealField v0 = build_near_eigenmode(big, 2.0, 1.0, 30.0);
    const double factor = lp_norm(apply_semigroup(2.0, 2.0, v0), 2.0) / lp_norm(v0, 2.0);
    const double target = std::exp(2.0 * spectral_abscissa(2.0));
    CHECK(factor >= 0.9 * target);
    CHECK(factor <= 1.1 * target);
  }
  // packet is mean-zero
  {
    const RealField v0 = build_near_eigenmode(big, 2.0, 1.0, 25.0);
    CHECK(std::abs(spatial_mean(v0)) <= 1e-15);
  }
  CHECK_THROWS_AS(build_near_eigenmode(big, 0.9, 1.0, 20.0), std::invalid_argument);
  CHECK_THROWS_AS(build_near_eigenmode(big, 2.0, 1.0, 4.0), std::invalid_argument);   // too narrow
  CHECK_THROWS_AS(build_near_eigenmode(big, 2.0, 1.0, 40.0), std::invalid_argument);  // too wide
}

TEST_CASE("mu kernel L1 probe") {
  const Grid g = make_grid(1, 500.0, 4096);
  // heat kernel: unit mass and no negative part
  const auto heat = mu_l1_probe(g, 0.0, {1.0, 5.0, 20.0, 100.0});
  for (double v : heat.l1) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  const auto mid = mu_l1_probe(g, 0.5, log_spaced(1.0, 100.0, 10));
  CHECK(mid.sup_l1 < 10.0);
  CHECK(!mid.boundary_warning);
  // values settle toward unit mass at late times
  CHECK(mid.l1.back() < mid.l1.front());

  const auto close = mu_l1_probe(g, 0.99, log_spaced(1.0, 100.0, 6));
  CHECK(close.sup_l1 < 50.0);
  CHECK(close.sup_l1 >= mid.sup_l1);

  CHECK_THROWS_AS(mu_l1_probe(g, 1.0, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(mu_l1_probe(g, 0.5, {0.5, 2.0}), std::invalid_argument);
}
