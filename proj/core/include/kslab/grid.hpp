#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace kslab {

// Periodic box [0, L_j) per axis with N_j evenly spaced nodes at x = i * L_j / N_j.
// The discrete wavenumber lattice per axis is { 2*pi*m / L_j : m = -N_j/2 .. N_j/2 - 1 }.
// Storage is row-major with axis 0 slowest; spectral storage index m maps to the
// signed mode m for m < N/2 and m - N otherwise (m == N/2 is the Nyquist mode).
struct Grid {
  int dim = 1;
  std::array<double, 2> extent{0.0, 0.0};
  std::array<int, 2> points{0, 0};

  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(points[0])
                    : static_cast<std::size_t>(points[0]) * static_cast<std::size_t>(points[1]);
  }
  double spacing(int axis) const { return extent[axis] / points[axis]; }
  double min_spacing() const {
    double s = spacing(0);
    if (dim == 2) s = std::min(s, spacing(1));
    return s;
  }
  double cell_volume() const {
    double v = spacing(0);
    if (dim == 2) v *= spacing(1);
    return v;
  }
  double volume() const {
    double v = extent[0];
    if (dim == 2) v *= extent[1];
    return v;
  }
  double node(int axis, int index) const { return index * spacing(axis); }
  int signed_mode(int axis, int m) const {
    const int n = points[axis];
    return m < n / 2 ? m : m - n;
  }
  // |k| of the highest resolved mode along the coarsest axis.
  double max_wavenumber() const;

  bool operator==(const Grid&) const = default;
};

// Validates dim in {1,2}, even points >= 8, positive extent; throws
// std::invalid_argument listing every violation.
Grid make_grid(int dim, double extent, int points);
Grid make_grid(int dim, const std::array<double, 2>& extent, const std::array<int, 2>& points);

struct RealField {
  Grid grid;
  std::vector<double> values;
};

// DFT amplitudes: f(x) = sum_k c_k exp(i k.x). The forward/inverse pair is an exact
// roundtrip; the absolute normalization is internal and not observable.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;
};

RealField make_field(const Grid& g, double fill = 0.0);

struct Mode {
  std::array<double, 2> k{0.0, 0.0};
  double k2 = 0.0;
  std::array<bool, 2> nyquist{false, false};
  bool any_nyquist = false;
};

template <class F>
inline void for_each_mode(const Grid& g, F&& f) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const int n0 = g.points[0];
  const double dk0 = two_pi / g.extent[0];
  if (g.dim == 1) {
    for (int m0 = 0; m0 < n0; ++m0) {
      const int s0 = (m0 < n0 / 2) ? m0 : m0 - n0;
      Mode md{};
      md.k[0] = s0 * dk0;
      md.k2 = md.k[0] * md.k[0];
      md.nyquist[0] = (s0 == -n0 / 2);
      md.any_nyquist = md.nyquist[0];
      f(static_cast<std::size_t>(m0), md);
    }
    return;
  }
  const int n1 = g.points[1];
  const double dk1 = two_pi / g.extent[1];
  std::size_t idx = 0;
  for (int m0 = 0; m0 < n0; ++m0) {
    const int s0 = (m0 < n0 / 2) ? m0 : m0 - n0;
    const double k0 = s0 * dk0;
    const bool ny0 = (s0 == -n0 / 2);
    for (int m1 = 0; m1 < n1; ++m1, ++idx) {
      const int s1 = (m1 < n1 / 2) ? m1 : m1 - n1;
      Mode md{};
      md.k[0] = k0;
      md.k[1] = s1 * dk1;
      md.k2 = k0 * k0 + md.k[1] * md.k[1];
      md.nyquist[0] = ny0;
      md.nyquist[1] = (s1 == -n1 / 2);
      md.any_nyquist = ny0 || md.nyquist[1];
      f(idx, md);
    }
  }
}

SpectralField forward_transform(const RealField& f);
RealField inverse_transform(const SpectralField& g);

// One component per axis; multiplier i*k_j with the Nyquist mode zeroed.
std::vector<RealField> spectral_gradient(const RealField& f);

// Exact heat propagator exp(t*Laplacian), multiplier exp(-t|k|^2); requires t >= 0.
RealField apply_heat(const RealField& f, double t);

bool is_hermitian(const SpectralField& g, double tol = 1e-12);

double field_min(const RealField& f);
double field_max_abs(const RealField& f);
double spatial_mean(const RealField& f);

void require_same_grid(const Grid& a, const Grid& b, const char* what);
void require_finite(const RealField& f, const char* what);

}  // namespace kslab
