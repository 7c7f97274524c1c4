#include "kslab/random.hpp"

#include <cmath>
#include <numbers>

namespace kslab {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

SplitRng SplitRng::split(std::string_view name) const {
  SplitRng child(0);
  child.state_ = mix64(state_ ^ fnv1a(name));
  return child;
}

std::uint64_t SplitRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  return mix64(state_);
}

double SplitRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

RealField random_smooth_field(const Grid& g, SplitRng& rng, double corr_length, double amplitude) {
  RealField noise = make_field(g);
  for (auto& v : noise.values) v = rng.normal();
  SpectralField nhat = forward_transform(noise);
  for_each_mode(g, [&](std::size_t idx, const Mode& m) {
    if (m.any_nyquist) {
      nhat.coeffs[idx] = 0.0;
    } else {
      nhat.coeffs[idx] *= std::exp(-0.25 * m.k2 * corr_length * corr_length);
    }
  });
  RealField f = inverse_transform(nhat);
  const double sup = field_max_abs(f);
  if (sup > 0.0) {
    const double s = amplitude / sup;
    for (auto& v : f.values) v *= s;
  }
  return f;
}

}  // namespace kslab
