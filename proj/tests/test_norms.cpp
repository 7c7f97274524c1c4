#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kslab/grid.hpp"
#include "kslab/norms.hpp"
#include "kslab/random.hpp"

using namespace kslab;

namespace {
constexpr double pi = std::numbers::pi;

RealField gaussian_bump(const Grid& g, double center, double sigma, double amp = 1.0) {
  RealField f = make_field(g);
  for (int i = 0; i < g.points[0]; ++i) {
    double d = g.node(0, i) - center;
    d -= g.extent[0] * std::round(d / g.extent[0]);
    f.values[i] = amp * std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return f;
}
}  // namespace

TEST_CASE("lp_norm basics") {
  const Grid g = make_grid(1, 32.0, 512);
  // constant on a box of volume V: |c| V^(1/2) for p = 2
  CHECK(lp_norm(make_field(g, -3.0), 2.0) == doctest::Approx(3.0 * std::sqrt(32.0)).epsilon(1e-12));
  CHECK(lp_norm(make_field(g, -3.0), inf_p) == doctest::Approx(3.0));
  // unit-height bump of mass sigma*sqrt(2 pi)
  const double sigma = 0.5;
  const RealField bump = gaussian_bump(g, 16.0, sigma);
  CHECK(lp_norm(bump, 1.0) == doctest::Approx(sigma * std::sqrt(2.0 * pi)).epsilon(1e-6));
  CHECK_THROWS_AS(lp_norm(bump, 0.5), std::invalid_argument);
}

TEST_CASE("Hoelder spot-check on random fields") {
  const Grid g = make_grid(1, 16.0, 256);
  SplitRng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.2 + rng.uniform(), 1.0);
    const RealField h = random_smooth_field(g, rng, 0.2 + rng.uniform(), 1.0);
    RealField fh = make_field(g);
    for (std::size_t i = 0; i < fh.values.size(); ++i) fh.values[i] = f.values[i] * h.values[i];
    CHECK(lp_norm(fh, 1.0) <= lp_norm(f, 2.0) * lp_norm(h, 2.0) * (1.0 + 1e-12));
  }
}

TEST_CASE("uloc norm of a constant: window measure 2 in 1d, up to one cell") {
  const Grid g = make_grid(1, 32.0, 512);
  const double c = 1.7;
  const double u = uloc_norm(make_field(g, c), NormSpec{2.0, 1.0, WindowShape::ball, 1});
  // cell-center classification makes the discrete window measure 2 + O(h)
  CHECK(std::abs(u - c * std::sqrt(2.0)) <= 2.0 * g.spacing(0) * c);
}

TEST_CASE("bump inside one window: uloc equals the global norm") {
  const Grid g = make_grid(1, 32.0, 512);
  const RealField bump = gaussian_bump(g, 16.0, 0.2);
  const double u = uloc_norm(bump, NormSpec{2.0, 1.0, WindowShape::ball, 1});
  CHECK(u == doctest::Approx(lp_norm(bump, 2.0)).epsilon(1e-5));
}

TEST_CASE("comb of bumps: uloc is box-size independent, the global norm is not") {
  auto comb = [](const Grid& g, double period, double sigma) {
    RealField f = make_field(g);
    const long nb = std::lround(g.extent[0] / period);
    for (int i = 0; i < g.points[0]; ++i) {
      double acc = 0.0;
      for (long m = 0; m < nb; ++m) {
        double d = g.node(0, i) - (m + 0.5) * period;
        d -= g.extent[0] * std::round(d / g.extent[0]);
        acc += std::exp(-d * d / (2.0 * sigma * sigma));
      }
      f.values[i] = acc;
    }
    return f;
  };
  const Grid g32 = make_grid(1, 32.0, 512);
  const Grid g64 = make_grid(1, 64.0, 1024);
  const RealField c32 = comb(g32, 4.0, 0.3);
  const RealField c64 = comb(g64, 4.0, 0.3);
  const NormSpec spec{2.0, 1.0, WindowShape::ball, 1};
  CHECK(uloc_norm(c32, spec) == doctest::Approx(uloc_norm(c64, spec)).epsilon(1e-9));
  CHECK(lp_norm(c64, 2.0) == doctest::Approx(std::sqrt(2.0) * lp_norm(c32, 2.0)).epsilon(1e-9));
  // and the uloc norm equals the single-bump norm
  const RealField bump = gaussian_bump(g32, 2.0, 0.3);
  CHECK(uloc_norm(c32, spec) == doctest::Approx(lp_norm(bump, 2.0)).epsilon(0.02));
}

TEST_CASE("uloc preconditions") {
  const Grid g = make_grid(1, 8.0, 64);
  const RealField f = make_field(g, 1.0);
  CHECK_THROWS_AS(uloc_norm(f, NormSpec{2.0, 2.0, WindowShape::ball, 1}), std::invalid_argument);
  CHECK_THROWS_AS(uloc_norm(f, NormSpec{0.9, 1.0, WindowShape::ball, 1}), std::invalid_argument);
  CHECK_THROWS_AS(uloc_norm(f, NormSpec{2.0, 1.0, WindowShape::ball, 0}), std::invalid_argument);
}

TEST_CASE("uloc ordering: below the global norm, monotone in the radius, stride underestimates") {
  const Grid g = make_grid(1, 32.0, 512);
  SplitRng rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.2 + 1.5 * rng.uniform(), 1.0);
    for (double p : {1.0, 2.0, 4.0}) {
      const double u1 = uloc_norm(f, NormSpec{p, 1.0, WindowShape::ball, 1});
      CHECK(u1 <= lp_norm(f, p) * (1.0 + 1e-12));
      const double u05 = uloc_norm(f, NormSpec{p, 0.5, WindowShape::ball, 1});
      const double u15 = uloc_norm(f, NormSpec{p, 1.5, WindowShape::ball, 1});
      CHECK(u05 <= u15 * (1.0 + 1e-12));
      // covering a radius-1.5 window with five radius-0.5 windows
      CHECK(u15 <= std::pow(5.0, 1.0 / p) * u05 * (1.0 + 1e-9));
      const double strided = uloc_norm(f, NormSpec{p, 1.0, WindowShape::ball, 4});
      CHECK(strided <= u1 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("uloc norm is absolutely homogeneous and subadditive") {
  const Grid g = make_grid(1, 32.0, 256);
  SplitRng rng(9);
  const NormSpec spec{2.0, 1.0, WindowShape::ball, 1};
  for (int trial = 0; trial < 20; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.5, 1.0);
    const RealField h = random_smooth_field(g, rng, 0.7, 1.0);
    RealField scaled = f, sum = f;
    for (auto& v : scaled.values) v *= -2.5;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += h.values[i];
    CHECK(uloc_norm(scaled, spec) == doctest::Approx(2.5 * uloc_norm(f, spec)).epsilon(1e-12));
    CHECK(uloc_norm(sum, spec) <= (uloc_norm(f, spec) + uloc_norm(h, spec)) * (1.0 + 1e-12));
  }
}

TEST_CASE("cube windows and 2d ball windows work") {
  const Grid g = make_grid(2, 16.0, 128);
  SplitRng rng(13);
  const RealField f = random_smooth_field(g, rng, 0.8, 1.0);
  const double ball = uloc_norm(f, NormSpec{2.0, 1.0, WindowShape::ball, 1});
  const double cube = uloc_norm(f, NormSpec{2.0, 1.0, WindowShape::cube, 1});
  CHECK(ball <= cube * (1.0 + 1e-12));  // the ball sits inside the cube
  CHECK(cube <= lp_norm(f, 2.0) * (1.0 + 1e-12));
}

TEST_CASE("cube/ball sandwich: constants, random fields, corner bumps") {
  const Grid g = make_grid(1, 32.0, 512);
  const auto flat = check_cube_ball_sandwich(make_field(g, 1.0), 2.0);
  CHECK(flat.pass);
  CHECK(flat.lhs < flat.mid);
  CHECK(flat.mid < flat.rhs);

  SplitRng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.2 + 2.0 * rng.uniform(), 1.0);
    CHECK(check_cube_ball_sandwich(f, trial % 2 ? 2.0 : 1.0).pass);
  }
  // adversarial concentration at a cube corner
  const RealField corner = gaussian_bump(g, 0.5, 0.15);
  CHECK(check_cube_ball_sandwich(corner, 2.0).pass);

  const Grid g2 = make_grid(2, 16.0, 64);
  SplitRng rng2(22);
  for (int trial = 0; trial < 5; ++trial) {
    const RealField f = random_smooth_field(g2, rng2, 0.5 + rng2.uniform(), 1.0);
    CHECK(check_cube_ball_sandwich(f, 2.0).pass);
  }
  // non-integer extent is rejected
  const Grid gbad = make_grid(1, 2.0 * pi, 64);
  CHECK_THROWS_AS(check_cube_ball_sandwich(make_field(gbad, 1.0), 2.0), std::invalid_argument);
}

TEST_CASE("Young-type uloc inequality for grad K convolution") {
  const Grid g = make_grid(1, 32.0, 512);
  // constants map to zero
  const auto zero = check_young_uloc(make_field(g, 5.0), 2.0, 2.0, 1.0);
  CHECK(zero.pass);
  CHECK(zero.lhs <= 1e-12);

  SplitRng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 15; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.3 + 1.5 * rng.uniform(), 1.0);
    const auto rep = check_young_uloc(f, 2.0, 2.0, 1.0);
    CHECK(rep.pass);
    CHECK(rep.proof_constant == doctest::Approx(144.0));  // 90*1 + 54*1 in one dimension
    worst = std::max(worst, rep.empirical_c);
  }
  CHECK(worst <= 3.0);
  CHECK(worst > 0.0);

  // exponent triples violating 1 + 1/p = 1/q + 1/r are rejected
  CHECK_THROWS_AS(check_young_uloc(make_field(g, 1.0), 2.0, 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(check_young_uloc(make_field(g, 1.0), 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("heat semigroup contracts the uloc norm and is continuous at t = 0") {
  const Grid g = make_grid(1, 32.0, 512);
  SplitRng rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    const RealField f = random_smooth_field(g, rng, 0.3 + rng.uniform(), 1.0);
    for (double t : {0.1, 1.0, 10.0}) {
      const auto rep = heat_uloc_spotcheck(f, 2.0, 2.0, t);
      CHECK(rep.contraction_case);
      CHECK(rep.pass);
    }
  }
  // || e^{t Lap} f - f ||_uloc -> 0 as t -> 0
  const RealField f = random_smooth_field(g, rng, 1.0, 1.0);
  const NormSpec spec{2.0, 1.0, WindowShape::ball, 1};
  double prev = 1e300;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const RealField ht = apply_heat(f, t);
    RealField diff = ht;
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= f.values[i];
    const double d = uloc_norm(diff, spec);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-3 * uloc_norm(f, spec));

  // smoothing case: the empirical constant is recorded and finite
  const auto smooth = heat_uloc_spotcheck(f, inf_p, 1.0, 1.0);
  CHECK(!smooth.contraction_case);
  CHECK(smooth.pass);
  CHECK(smooth.empirical_c > 0.0);
  CHECK_THROWS_AS(heat_uloc_spotcheck(f, 1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(heat_uloc_spotcheck(f, 2.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("boundary mass fraction distinguishes centered from wrapped data") {
  const Grid g = make_grid(1, 32.0, 256);
  const RealField centered = gaussian_bump(g, 16.0, 1.0);
  std::size_t c = 128;
  CHECK(boundary_mass_fraction(centered, c) <= 1e-10);
  const RealField edge = gaussian_bump(g, 0.5, 1.0);
  CHECK(boundary_mass_fraction(edge, c) > 0.5);
}
