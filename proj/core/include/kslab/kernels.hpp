#pragma once

#include "kslab/grid.hpp"

namespace kslab {

// Symbol table of the Bessel potential: 1/(1 + |k|^2) on the grid's wavenumber
// lattice. Values lie in (0, 1], equal 1 exactly at k = 0, and depend on k only
// through |k|.
struct BesselMultiplier {
  explicit BesselMultiplier(const Grid& g);
  Grid grid;
  std::vector<double> values;
};

// Solves -Lap(psi) + psi = u on the periodic grid: psi_hat = u_hat / (1 + |k|^2).
RealField solve_chemoattractant(const RealField& u);

// Closed-form kernel in one dimension: exp(-|x|) / 2.
double bessel_kernel_1d(double x);

// Components of grad(K * u): multiplier i k_j / (1 + |k|^2).
std::vector<RealField> grad_K_conv(const RealField& u);

// -Lap(K * u): multiplier |k|^2 / (1 + |k|^2); contraction on L^2.
RealField neg_laplace_K_conv(const RealField& u);

// Closed-form norms of grad K in one dimension (|K'(x)| = exp(-|x|)/2):
// L^1 norm is 1; L^r norm is (2^(1-r)/r)^(1/r) for finite r >= 1.
double grad_bessel_l1_1d();
double grad_bessel_lr_1d(double r);

}  // namespace kslab
