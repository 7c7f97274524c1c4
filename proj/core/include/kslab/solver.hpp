#pragma once

#include <functional>
#include <vector>

#include "kslab/grid.hpp"
#include "kslab/norms.hpp"

namespace kslab {

enum class Scheme { etd1, etd_rk2 };

// raw: u_t = Lap u - div(u grad K*u), heat propagator plus full nonlinearity.
// perturbation: v_t = -h_A v - div(v grad K*v) with the linearized propagator
// exp(-dt h_A) applied exactly per step.
enum class Formulation { raw, perturbation };

struct SolverConfig {
  Formulation formulation = Formulation::perturbation;
  double A = 0.0;         // background constant; must be 0 for the raw formulation
  double dt = 0.0;        // <= 0 selects 0.25 * dt_stability_bound
  double horizon = 1.0;
  bool dealias = true;    // 2/3-rule truncation of both quadratic factors
  Scheme scheme = Scheme::etd_rk2;
  double positivity_tol = 1e-8;
  double blowup_threshold = 0.0;  // <= 0 selects 1e6 * sup|initial|
  int record_stride = 1;  // norm samples every k-th step
  int save_stride = 0;    // field snapshots every k-th record; 0 keeps first and last
};

// Documented heuristic guarding the explicit nonlinear term:
// 0.5 * min( 1 / (max_lattice(max(0, -h_A)) + 1), min_spacing^2 ).
double dt_stability_bound(const Grid& g, double A);

enum class RunOutcome { completed, blowup };

struct Trajectory {
  Grid grid;
  std::vector<NormSample> series;       // strictly increasing times
  std::vector<double> snapshot_times;
  std::vector<RealField> snapshots;
  RunOutcome outcome = RunOutcome::completed;
  double end_time = 0.0;
  double blowup_time = -1.0;
  double initial_sup = 0.0;
  double max_mean_drift = 0.0;          // drift of the conserved k = 0 mode
};

// Lap u - div(u grad K*u); quadratic product formed in physical space after the
// 2/3-rule truncation of both factors, divergence taken spectrally.
RealField nonlinear_rhs(const RealField& u, bool dealias = true);

// Lap v - A Lap K*v - div(v grad K*v); equals nonlinear_rhs(A + v) identically
// since grad K * const = 0.
RealField perturbation_rhs(double A, const RealField& v, bool dealias = true);

using ExtraNorm = std::function<double(const RealField&)>;

// ETD stepping: the linear symbol is integrated exactly per step, the
// nonlinearity explicitly via the chosen scheme. Crossing the blow-up threshold
// (or losing finiteness) halts the run with a blowup outcome; that is a
// scientific result, not an error.
Trajectory evolve(const RealField& initial, const SolverConfig& config,
                  const ExtraNorm& extra_norm = {});

struct PositivityViolation {
  double t = 0.0;
  std::size_t index = 0;
  double value = 0.0;
};

struct PositivityReport {
  double worst_min = 0.0;
  double threshold = 0.0;  // -tol * sup|u0|
  bool pass = false;
  std::vector<PositivityViolation> violations;  // from stored snapshots
};

PositivityReport check_positivity(const Trajectory& traj, double tol);

struct BlowupStatus {
  enum class Kind { global, blowup, indeterminate };
  Kind kind = Kind::global;
  double t_star = -1.0;
};

// blowup when the threshold was crossed; indeterminate when the horizon ended
// with the sup norm still accelerating on a log scale.
BlowupStatus detect_blowup(const Trajectory& traj);

struct PicardResult {
  std::vector<double> distances;  // sup-in-t L^p gap between successive iterates
  std::vector<double> ratios;     // distances[m] / distances[m-1]
  bool contractive = false;
  bool converged = false;
  int iterations = 0;
  RealField final_state;          // last iterate evaluated at t = T
};

// Picard iteration for v(t) = S_A(t) v0 - int_0^t grad S_A(t-s).(v grad K*v)(s) ds.
// The Duhamel integral uses composite trapezoid over `substeps` nodes with the
// gradient semigroup applied as an exact multiplier at each node; the apparent
// (t-s)^(-1/2) endpoint singularity does not occur on a fixed lattice because
// i k exp(-(t-s)h) stays bounded by max|k|. Non-contraction is reported, not
// thrown: it signals that T is too large for the fixed-point regime.
PicardResult picard_solve(double A, const RealField& v0, double T, int max_iter,
                          int substeps, double p = 2.0, bool dealias = true);

}  // namespace kslab
