#include "kslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fft_backend.hpp"

namespace kslab {

double Grid::max_wavenumber() const {
  double kmax = std::numbers::pi / spacing(0) - 2.0 * std::numbers::pi / extent[0];
  if (dim == 2) {
    kmax = std::min(kmax, std::numbers::pi / spacing(1) - 2.0 * std::numbers::pi / extent[1]);
  }
  return kmax;
}

Grid make_grid(int dim, const std::array<double, 2>& extent, const std::array<int, 2>& points) {
  std::vector<std::string> issues;
  if (dim != 1 && dim != 2) issues.push_back("dim must be 1 or 2");
  const int axes = (dim == 2) ? 2 : 1;
  for (int a = 0; a < axes; ++a) {
    if (!(extent[a] > 0.0)) issues.push_back("extent must be positive on axis " + std::to_string(a));
    if (points[a] < 8) issues.push_back("points must be >= 8 on axis " + std::to_string(a));
    if (points[a] % 2 != 0) issues.push_back("points must be even on axis " + std::to_string(a));
  }
  if (!issues.empty()) {
    std::ostringstream oss;
    oss << "invalid grid:";
    for (const auto& s : issues) oss << " [" << s << "]";
    throw std::invalid_argument(oss.str());
  }
  Grid g;
  g.dim = dim;
  g.extent = extent;
  g.points = points;
  if (dim == 1) {
    g.extent[1] = 0.0;
    g.points[1] = 0;
  }
  return g;
}

Grid make_grid(int dim, double extent, int points) {
  return make_grid(dim, {extent, extent}, {points, points});
}

RealField make_field(const Grid& g, double fill) { return RealField{g, std::vector<double>(g.size(), fill)}; }

SpectralField forward_transform(const RealField& f) {
  require_finite(f, "forward_transform");
  const std::size_t n = f.grid.size();
  std::vector<std::complex<double>> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = f.values[i];
  detail::dft(f.grid, in.data(), out.data(), -1);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
  return SpectralField{f.grid, std::move(out)};
}

RealField inverse_transform(const SpectralField& g) {
  const std::size_t n = g.grid.size();
  if (g.coeffs.size() != n) throw std::invalid_argument("inverse_transform: coefficient count mismatch");
  std::vector<std::complex<double>> out(n);
  detail::dft(g.grid, g.coeffs.data(), out.data(), +1);
  RealField f{g.grid, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) f.values[i] = out[i].real();
  return f;
}

std::vector<RealField> spectral_gradient(const RealField& f) {
  SpectralField fhat = forward_transform(f);
  std::vector<RealField> grad;
  grad.reserve(f.grid.dim);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    SpectralField comp{f.grid, fhat.coeffs};
    for_each_mode(f.grid, [&](std::size_t idx, const Mode& m) {
      if (m.nyquist[axis]) {
        comp.coeffs[idx] = 0.0;
      } else {
        comp.coeffs[idx] *= std::complex<double>(0.0, m.k[axis]);
      }
    });
    grad.push_back(inverse_transform(comp));
  }
  return grad;
}

RealField apply_heat(const RealField& f, double t) {
  if (t < 0.0) throw std::invalid_argument("apply_heat: t must be >= 0");
  SpectralField fhat = forward_transform(f);
  for_each_mode(f.grid, [&](std::size_t idx, const Mode& m) { fhat.coeffs[idx] *= std::exp(-t * m.k2); });
  return inverse_transform(fhat);
}

bool is_hermitian(const SpectralField& g, double tol) {
  double scale = 0.0;
  for (const auto& c : g.coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return true;
  const int n0 = g.grid.points[0];
  const int n1 = g.grid.dim == 2 ? g.grid.points[1] : 1;
  for (int m0 = 0; m0 < n0; ++m0) {
    const int r0 = (n0 - m0) % n0;
    for (int m1 = 0; m1 < n1; ++m1) {
      const int r1 = (n1 - m1) % n1;
      const auto a = g.coeffs[static_cast<std::size_t>(m0) * n1 + m1];
      const auto b = g.coeffs[static_cast<std::size_t>(r0) * n1 + r1];
      if (std::abs(a - std::conj(b)) > tol * scale) return false;
    }
  }
  return true;
}

double field_min(const RealField& f) {
  double m = f.values.empty() ? 0.0 : f.values[0];
  for (double v : f.values) m = std::min(m, v);
  return m;
}

double field_max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double spatial_mean(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.values.size());
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grids differ");
}

void require_finite(const RealField& f, const char* what) {
  if (f.values.size() != f.grid.size())
    throw std::invalid_argument(std::string(what) + ": value count does not match grid");
  for (double v : f.values) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": field has non-finite values");
  }
}

}  // namespace kslab
