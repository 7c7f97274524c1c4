#include "kslab/linsemi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kslab {

double dispersion_rate(double A, double k) {
  const double k2 = k * k;
  return -k2 + A * k2 / (1.0 + k2);
}

double spectral_abscissa(double A) {
  if (A <= 1.0) return 0.0;  // also covers A < 0
  const double s = std::sqrt(A) - 1.0;
  return s * s;
}

double peak_wavenumber(double A) {
  if (!(A > 1.0))
    throw std::invalid_argument("peak_wavenumber: no positive-growth mode exists for A <= 1");
  return std::sqrt(std::sqrt(A) - 1.0);
}

SemigroupSymbol::SemigroupSymbol(double A_, const Grid& g) : A(A_), grid(g), h(g.size(), 0.0) {
  for_each_mode(g, [&](std::size_t idx, const Mode& m) {
    h[idx] = m.k2 - A * m.k2 / (1.0 + m.k2);
  });
}

double SemigroupSymbol::lattice_max_rate() const {
  double best = -h[0];
  for (double v : h) best = std::max(best, -v);
  return best;
}

RealField apply_semigroup(const SemigroupSymbol& sym, double t, const RealField& v0) {
  if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
  require_same_grid(sym.grid, v0.grid, "apply_semigroup");
  SpectralField vhat = forward_transform(v0);
  for (std::size_t i = 0; i < vhat.coeffs.size(); ++i) vhat.coeffs[i] *= std::exp(-t * sym.h[i]);
  return inverse_transform(vhat);
}

RealField apply_semigroup(double A, double t, const RealField& v0) {
  return apply_semigroup(SemigroupSymbol(A, v0.grid), t, v0);
}

std::vector<RealField> apply_grad_semigroup(double A, double t, const RealField& v0) {
  if (t < 0.0) throw std::invalid_argument("apply_grad_semigroup: t must be >= 0");
  const SemigroupSymbol sym(A, v0.grid);
  SpectralField vhat = forward_transform(v0);
  for (std::size_t i = 0; i < vhat.coeffs.size(); ++i) vhat.coeffs[i] *= std::exp(-t * sym.h[i]);
  std::vector<RealField> out;
  out.reserve(v0.grid.dim);
  for (int axis = 0; axis < v0.grid.dim; ++axis) {
    SpectralField comp{v0.grid, vhat.coeffs};
    for_each_mode(v0.grid, [&](std::size_t idx, const Mode& m) {
      if (m.nyquist[axis]) {
        comp.coeffs[idx] = 0.0;
      } else {
        comp.coeffs[idx] *= std::complex<double>(0.0, m.k[axis]);
      }
    });
    out.push_back(inverse_transform(comp));
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  int n = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual_rms = std::sqrt(rss / n);
  return f;
}

RateFit fit_log_series(const std::vector<double>& times, const std::vector<double>& values,
                       double t_min, double t_max, RateFit::Kind kind) {
  if (times.size() != values.size()) throw std::invalid_argument("rate fit: series length mismatch");
  if (!(t_min < t_max)) throw std::invalid_argument("rate fit: need t_min < t_max");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    if (!(values[i] > 0.0)) continue;
    x.push_back(kind == RateFit::Kind::algebraic ? std::log(times[i]) : times[i]);
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 3) throw std::invalid_argument("rate fit: fewer than 3 usable samples in window");
  const LineFit lf = least_squares(x, y);
  RateFit rf;
  rf.kind = kind;
  rf.exponent = lf.slope;
  rf.prefactor = std::exp(lf.intercept);
  rf.residual = lf.residual_rms;
  rf.t_min = t_min;
  rf.t_max = t_max;
  rf.n = lf.n;
  return rf;
}

}  // namespace

RateFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                      double t_min, double t_max) {
  return fit_log_series(times, values, t_min, t_max, RateFit::Kind::algebraic);
}

RateFit fit_exponential(const std::vector<double>& times, const std::vector<double>& values,
                        double t_min, double t_max) {
  return fit_log_series(times, values, t_min, t_max, RateFit::Kind::exponential);
}

DecayProbeResult semigroup_decay_probe(double A, double p, double q, const RealField& v0,
                                       const std::vector<double>& times) {
  if (!(A < 1.0)) throw std::invalid_argument("semigroup_decay_probe: requires A < 1");
  if (!(q >= 1.0) || !(p >= q)) throw std::invalid_argument("semigroup_decay_probe: need 1 <= q <= p");
  if (times.size() < 4) throw std::invalid_argument("semigroup_decay_probe: need at least 4 times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && times[i] <= times[i - 1]))
      throw std::invalid_argument("semigroup_decay_probe: times must be positive and increasing");
  }
  require_finite(v0, "semigroup_decay_probe");

  std::size_t center = 0;
  double sup = 0.0;
  for (std::size_t i = 0; i < v0.values.size(); ++i) {
    if (std::abs(v0.values[i]) > sup) {
      sup = std::abs(v0.values[i]);
      center = i;
    }
  }
  if (boundary_mass_fraction(v0, center) > 0.01)
    throw std::invalid_argument("semigroup_decay_probe: initial data not localized inside the box");

  const SemigroupSymbol sym(A, v0.grid);
  SpectralField vhat0 = forward_transform(v0);

  DecayProbeResult res;
  for (double t : times) {
    SpectralField vhat{v0.grid, vhat0.coeffs};
    for (std::size_t i = 0; i < vhat.coeffs.size(); ++i) vhat.coeffs[i] *= std::exp(-t * sym.h[i]);
    const RealField v = inverse_transform(vhat);
    const double frac = boundary_mass_fraction(v, center);
    res.max_boundary_fraction = std::max(res.max_boundary_fraction, frac);
    if (frac > 0.01) break;  // wrap-around contamination: drop this and later samples
    res.times.push_back(t);
    res.p_norms.push_back(lp_norm(v, p));
    res.series.push_back(norm_sample(t, v));
  }
  res.used = res.times.size();
  if (res.used < 4)
    throw std::invalid_argument("semigroup_decay_probe: boundary contamination leaves fewer than 4 samples");
  res.fit = fit_power_law(res.times, res.p_norms, res.times.front() * (1.0 - 1e-12),
                          res.times.back() * (1.0 + 1e-12));
  return res;
}

RealField build_near_eigenmode(const Grid& g, double A, double amplitude, double width) {
  const double kstar = peak_wavenumber(A);  // rejects A <= 1
  if (!(width > 0.0) || width * kstar < 3.0)
    throw std::invalid_argument("build_near_eigenmode: packet too narrow (need width * k_peak >= 3)");
  for (int a = 0; a < g.dim; ++a) {
    if (5.0 * width > 0.5 * g.extent[a])
      throw std::invalid_argument("build_near_eigenmode: packet does not fit the box (need 5*width <= extent/2)");
  }
  RealField v = make_field(g);
  const double c0 = 0.5 * g.extent[0];
  const double c1 = g.dim == 2 ? 0.5 * g.extent[1] : 0.0;
  const int n0 = g.points[0];
  const int n1 = g.dim == 2 ? g.points[1] : 1;
  for (int i0 = 0; i0 < n0; ++i0) {
    const double dx0 = g.node(0, i0) - c0;
    for (int i1 = 0; i1 < n1; ++i1) {
      double r2 = dx0 * dx0;
      if (g.dim == 2) {
        const double dx1 = g.node(1, i1) - c1;
        r2 += dx1 * dx1;
      }
      v.values[static_cast<std::size_t>(i0) * n1 + i1] =
          amplitude * std::exp(-r2 / (2.0 * width * width)) * std::cos(kstar * dx0);
    }
  }
  const double mean = spatial_mean(v);
  for (auto& x : v.values) x -= mean;
  return v;
}

MuProbeResult mu_l1_probe(const Grid& g, double A, const std::vector<double>& times) {
  if (!(A >= 0.0 && A < 1.0)) throw std::invalid_argument("mu_l1_probe: requires A in [0,1)");
  if (times.empty()) throw std::invalid_argument("mu_l1_probe: no times given");
  for (double t : times) {
    if (!(t >= 1.0)) throw std::invalid_argument("mu_l1_probe: times must be >= 1");
  }
  const SemigroupSymbol sym(A, g);
  const double inv_vol = 1.0 / g.volume();
  MuProbeResult res;
  for (double t : times) {
    SpectralField khat{g, std::vector<std::complex<double>>(g.size())};
    for (std::size_t i = 0; i < khat.coeffs.size(); ++i) khat.coeffs[i] = std::exp(-t * sym.h[i]) * inv_vol;
    const RealField mu = inverse_transform(khat);  // kernel centered at x = 0, unit mass
    const double frac = boundary_mass_fraction(mu, 0);
    res.max_boundary_mass = std::max(res.max_boundary_mass, frac);
    res.times.push_back(t);
    res.l1.push_back(lp_norm(mu, 1.0));
    res.sup_l1 = std::max(res.sup_l1, res.l1.back());
  }
  res.boundary_warning = res.max_boundary_mass > 1e-6;
  return res;
}

std::vector<double> log_spaced(double t0, double t1, int n) {
  if (!(t0 > 0.0) || !(t1 > t0) || n < 2) throw std::invalid_argument("log_spaced: bad arguments");
  std::vector<double> out(n);
  const double l0 = std::log(t0), l1 = std::log(t1);
  for (int i = 0; i < n; ++i) out[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  return out;
}

}  // namespace kslab
