#pragma once

#include <complex>

#include "kslab/grid.hpp"

namespace kslab::detail {

// Unnormalized DFT on the grid's sample layout. sign = -1 analyzes with
// exp(-i k.x), sign = +1 synthesizes with exp(+i k.x).
void dft(const Grid& g, const std::complex<double>* in, std::complex<double>* out, int sign);

}  // namespace kslab::detail
