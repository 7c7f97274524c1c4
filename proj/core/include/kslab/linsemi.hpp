#pragma once

#include <vector>

#include "kslab/grid.hpp"
#include "kslab/norms.hpp"

namespace kslab {

// Linear growth rate of mode k about the constant state A:
// -h(k) with h(k) = |k|^2 - A |k|^2 / (1 + |k|^2).
double dispersion_rate(double A, double k);

// Top of the linearized spectrum: 0 for A <= 1 (including A < 0),
// (sqrt(A) - 1)^2 for A > 1.
double spectral_abscissa(double A);

// Maximizer of -h for A > 1: |k*| = sqrt(sqrt(A) - 1). Rejects A <= 1.
double peak_wavenumber(double A);

// Per-wavenumber symbol table h(k) for the linearized semigroup on a grid.
struct SemigroupSymbol {
  SemigroupSymbol(double A, const Grid& g);
  double A = 0.0;
  Grid grid;
  std::vector<double> h;
  double lattice_max_rate() const;  // max over the lattice of -h(k)
};

// Exact multiplier evolution exp(-t h(k)); t = 0 is the identity. Rejects t < 0.
RealField apply_semigroup(double A, double t, const RealField& v0);
RealField apply_semigroup(const SemigroupSymbol& sym, double t, const RealField& v0);

// grad S_A(t): multiplier i k_j exp(-t h(k)) per component.
std::vector<RealField> apply_grad_semigroup(double A, double t, const RealField& v0);

struct RateFit {
  enum class Kind { algebraic, exponential };
  Kind kind = Kind::algebraic;
  double exponent = 0.0;   // slope of log y against log t (algebraic) or t (exponential)
  double prefactor = 0.0;  // exp(intercept)
  double residual = 0.0;   // rms residual of the log fit
  double t_min = 0.0;
  double t_max = 0.0;
  int n = 0;
};

// Ordinary least squares on the log-transformed series restricted to [t_min, t_max].
RateFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                      double t_min, double t_max);
RateFit fit_exponential(const std::vector<double>& times, const std::vector<double>& values,
                        double t_min, double t_max);

struct DecayProbeResult {
  RateFit fit;
  std::vector<double> times;
  std::vector<double> p_norms;
  std::vector<NormSample> series;
  std::size_t used = 0;                  // samples surviving the boundary-mass cut
  double max_boundary_fraction = 0.0;
};

// Evolves localized data under S_A (A < 1) and fits log||v(t)||_p against log t.
// Sample times past the first with boundary mass above 1% of |v| are discarded;
// throws if fewer than four samples remain.
DecayProbeResult semigroup_decay_probe(double A, double p, double q, const RealField& v0,
                                       const std::vector<double>& times);

// Gaussian-envelope plane wave at the peak wavenumber, mean-zero corrected:
// amplitude * exp(-|x-c|^2 / (2 width^2)) * cos(k* (x_0 - c_0)).
// Requires A > 1, width * k* >= 3, and 5 * width <= extent / 2 on every axis.
RealField build_near_eigenmode(const Grid& g, double A, double amplitude, double width);

struct MuProbeResult {
  std::vector<double> times;
  std::vector<double> l1;
  double sup_l1 = 0.0;
  double max_boundary_mass = 0.0;
  bool boundary_warning = false;  // raised when kernel mass near the boundary exceeds 1e-6
};

// L^1 quadrature of the semigroup kernel mu_A(t), the inverse transform of
// exp(-t h(k)) normalized to unit mass. Requires A in [0,1) and times >= 1.
MuProbeResult mu_l1_probe(const Grid& g, double A, const std::vector<double>& times);

std::vector<double> log_spaced(double t0, double t1, int n);

}  // namespace kslab
