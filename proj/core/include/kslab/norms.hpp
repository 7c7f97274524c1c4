#pragma once

#include <limits>
#include <string>

#include "kslab/grid.hpp"

namespace kslab {

inline constexpr double inf_p = std::numeric_limits<double>::infinity();

enum class WindowShape { ball, cube };

// Window family for the uniformly local norm: sup over window centers (every
// stride-th grid node) of the windowed L^p quadrature. Coarse strides
// underestimate the sup by at most one cell's modulus of continuity.
struct NormSpec {
  double p = 2.0;
  double window_radius = 1.0;
  WindowShape shape = WindowShape::ball;
  int stride = 1;
};

// Riemann-sum L^p norm, (sum |f|^p cellvol)^(1/p); max|f| for p = inf.
double lp_norm(const RealField& f, double p);

double uloc_norm(const RealField& f, const NormSpec& spec);

double l2_distance(const RealField& a, const RealField& b);
double sup_distance(const RealField& a, const RealField& b);

struct NormSample {
  double t = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double min = 0.0;
  double extra = std::numeric_limits<double>::quiet_NaN();
};

NormSample norm_sample(double t, const RealField& f);

// 3^-n sup_x ||f||_{L^p(B_1(x))} <= sup_k ||f||_{L^p(Q_1/2(k))} <= 2^n sup_x ||f||_{L^p(B_1(x))}
// with cubes pinned to the integer lattice; requires integer extent so the cube
// mesh tiles the box.
struct SandwichReport {
  double lhs = 0.0;  // 3^-n * sup over balls
  double mid = 0.0;  // sup over unit lattice cubes
  double rhs = 0.0;  // 2^n * sup over balls
  bool pass = false;
};
SandwichReport check_cube_ball_sandwich(const RealField& f, double p);

// ||grad K * f||_{uloc p} <= (90^n ||grad K||_1 + 54^n ||grad K||_r) ||f||_{uloc q}
// for 1 + 1/p = 1/q + 1/r, 1 <= q <= p <= inf, 1 <= r < n/(n-1). One-dimensional
// only; the empirical constant is lhs / ((||grad K||_1 + ||grad K||_r) ||f||_{uloc q}).
struct YoungReport {
  double lhs = 0.0;
  double bound = 0.0;
  double proof_constant = 0.0;
  double empirical_c = 0.0;
  bool pass = false;
};
YoungReport check_young_uloc(const RealField& f, double p, double q, double r);

// Heat semigroup on the uloc norm. For p == q the bound is a contraction with
// constant 1; for q < p the report records the empirical constant against the
// shape C (1 + t^(-(n/2)(1/q - 1/p))).
struct HeatUlocReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;        // lhs / ||f||_{uloc q}
  double shape_factor = 0.0; // 1 + t^(-(n/2)(1/q-1/p))
  double empirical_c = 0.0;  // ratio / shape_factor
  bool contraction_case = false;
  bool pass = false;
};
HeatUlocReport heat_uloc_spotcheck(const RealField& f, double p, double q, double t);

// Fraction of sum|f| carried by nodes whose periodic offset from the given
// center exceeds frac * extent along some axis; wrap-around contamination gauge.
double boundary_mass_fraction(const RealField& f, std::size_t center_index, double frac = 0.45);

}  // namespace kslab
