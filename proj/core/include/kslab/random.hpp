#pragma once

#include <cstdint>
#include <string_view>

#include "kslab/grid.hpp"

namespace kslab {

// Deterministic splittable PRNG (splitmix64 core). Streams derived with split()
// are independent of draw order on the parent, which keeps experiment outputs
// bit-stable when sub-tasks are reordered or parallelized.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ull + 0x1234567) {}

  SplitRng split(std::string_view name) const;

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // standard Gaussian, Box-Muller

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Gaussian random field with spectral envelope exp(-|k|^2 corr_length^2 / 4),
// rescaled so that max|f| == amplitude (unless the draw is identically zero).
RealField random_smooth_field(const Grid& g, SplitRng& rng, double corr_length, double amplitude);

}  // namespace kslab
