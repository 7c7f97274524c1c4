#include "kslab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

BesselMultiplier::BesselMultiplier(const Grid& g) : grid(g), values(g.size(), 0.0) {
  for_each_mode(g, [&](std::size_t idx, const Mode& m) { values[idx] = 1.0 / (1.0 + m.k2); });
}

RealField solve_chemoattractant(const RealField& u) {
  require_finite(u, "solve_chemoattractant");
  SpectralField uhat = forward_transform(u);
  for_each_mode(u.grid, [&](std::size_t idx, const Mode& m) { uhat.coeffs[idx] /= 1.0 + m.k2; });
  return inverse_transform(uhat);
}

double bessel_kernel_1d(double x) { return 0.5 * std::exp(-std::abs(x)); }

std::vector<RealField> grad_K_conv(const RealField& u) {
  require_finite(u, "grad_K_conv");
  SpectralField uhat = forward_transform(u);
  std::vector<RealField> out;
  out.reserve(u.grid.dim);
  for (int axis = 0; axis < u.grid.dim; ++axis) {
    SpectralField comp{u.grid, uhat.coeffs};
    for_each_mode(u.grid, [&](std::size_t idx, const Mode& m) {
      if (m.nyquist[axis]) {
        comp.coeffs[idx] = 0.0;
      } else {
        comp.coeffs[idx] *= std::complex<double>(0.0, m.k[axis] / (1.0 + m.k2));
      }
    });
    out.push_back(inverse_transform(comp));
  }
  return out;
}

RealField neg_laplace_K_conv(const RealField& u) {
  require_finite(u, "neg_laplace_K_conv");
  SpectralField uhat = forward_transform(u);
  for_each_mode(u.grid, [&](std::size_t idx, const Mode& m) { uhat.coeffs[idx] *= m.k2 / (1.0 + m.k2); });
  return inverse_transform(uhat);
}

double grad_bessel_l1_1d() { return 1.0; }

double grad_bessel_lr_1d(double r) {
  if (!(r >= 1.0) || std::isinf(r)) throw std::invalid_argument("grad_bessel_lr_1d: r must be finite and >= 1");
  // int (exp(-|x|)/2)^r dx = 2^(1-r) / r
  return std::pow(std::pow(2.0, 1.0 - r) / r, 1.0 / r);
}

}  // namespace kslab
