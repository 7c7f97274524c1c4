#include "kslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft_backend.hpp"
#include "kslab/linsemi.hpp"

namespace kslab {
namespace {

using cd = std::complex<double>;

double phi1(double z) {
  if (std::abs(z) < 1e-3) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3)
    return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
  return (std::expm1(z) - z) / (z * z);
}

void to_phys(const Grid& g, const std::vector<cd>& hat, std::vector<cd>& tmp, std::vector<double>& out) {
  tmp.resize(hat.size());
  out.resize(hat.size());
  detail::dft(g, hat.data(), tmp.data(), +1);
  for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
}

void to_hat(const Grid& g, const std::vector<double>& phys, std::vector<cd>& tmp, std::vector<cd>& out) {
  tmp.resize(phys.size());
  out.resize(phys.size());
  for (std::size_t i = 0; i < phys.size(); ++i) tmp[i] = phys[i];
  detail::dft(g, tmp.data(), out.data(), -1);
  const double s = 1.0 / static_cast<double>(phys.size());
  for (auto& c : out) c *= s;
}

// Shared multiplier tables: 2/3-rule mask (Nyquist always zeroed), i k_j and
// i k_j / (1 + |k|^2) with per-axis Nyquist kill.
struct SpectralTables {
  std::vector<double> mask;
  std::array<std::vector<double>, 2> kvec;
  std::array<std::vector<double>, 2> gradk;

  SpectralTables(const Grid& g, bool dealias) {
    const std::size_t n = g.size();
    mask.assign(n, 1.0);
    for (int a = 0; a < 2; ++a) {
      kvec[a].assign(n, 0.0);
      gradk[a].assign(n, 0.0);
    }
    const int n0 = g.points[0];
    const int n1 = g.dim == 2 ? g.points[1] : 1;
    const int cut0 = n0 / 3;
    const int cut1 = n1 / 3;
    for_each_mode(g, [&](std::size_t idx, const Mode& m) {
      const int m0 = static_cast<int>(idx) / n1;
      const int m1 = static_cast<int>(idx) % n1;
      const int s0 = std::abs(g.signed_mode(0, m0));
      if (m.any_nyquist) mask[idx] = 0.0;
      if (dealias && s0 > cut0) mask[idx] = 0.0;
      if (dealias && g.dim == 2 && std::abs(g.signed_mode(1, m1)) > cut1) mask[idx] = 0.0;
      for (int a = 0; a < 2; ++a) {
        kvec[a][idx] = m.nyquist[a] ? 0.0 : m.k[a];
        gradk[a][idx] = kvec[a][idx] / (1.0 + m.k2);
      }
    });
  }
};

// N(v) = -div(v grad K*v) in spectral space. The quadratic product is formed in
// physical space after truncating both factors; the divergence multiplier i*k
// vanishes at k = 0, so the spatial mean is conserved exactly.
class QuadraticTerm {
 public:
  QuadraticTerm(const Grid& g, bool dealias) : grid_(g), tables_(g, dealias) {}

  void operator()(const std::vector<cd>& vhat, std::vector<cd>& out) {
    const std::size_t n = vhat.size();
    out.assign(n, cd(0.0));
    work_.resize(n);
    for (std::size_t i = 0; i < n; ++i) work_[i] = tables_.mask[i] * vhat[i];
    to_phys(grid_, work_, tmp_, vphys_);
    for (int a = 0; a < grid_.dim; ++a) {
      for (std::size_t i = 0; i < n; ++i)
        work_[i] = cd(0.0, tables_.gradk[a][i]) * tables_.mask[i] * vhat[i];
      to_phys(grid_, work_, tmp_, gphys_);
      prod_.resize(n);
      for (std::size_t i = 0; i < n; ++i) prod_[i] = vphys_[i] * gphys_[i];
      to_hat(grid_, prod_, tmp_, work_);
      for (std::size_t i = 0; i < n; ++i)
        out[i] -= cd(0.0, tables_.kvec[a][i]) * tables_.mask[i] * work_[i];
    }
  }

 private:
  Grid grid_;
  SpectralTables tables_;
  std::vector<cd> work_, tmp_;
  std::vector<double> vphys_, gphys_, prod_;
};

std::vector<double> linear_rates(const Grid& g, Formulation form, double A) {
  std::vector<double> lam(g.size(), 0.0);
  if (form == Formulation::raw) {
    for_each_mode(g, [&](std::size_t idx, const Mode& m) { lam[idx] = -m.k2; });
  } else {
    const SemigroupSymbol sym(A, g);
    for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = -sym.h[i];
  }
  return lam;
}

}  // namespace

double dt_stability_bound(const Grid& g, double A) {
  const SemigroupSymbol sym(A, g);
  const double max_rate = std::max(0.0, sym.lattice_max_rate());
  const double h = g.min_spacing();
  return 0.5 * std::min(1.0 / (max_rate + 1.0), h * h);
}

RealField nonlinear_rhs(const RealField& u, bool dealias) {
  require_finite(u, "nonlinear_rhs");
  SpectralField uhat = forward_transform(u);
  QuadraticTerm quad(u.grid, dealias);
  std::vector<cd> nhat;
  quad(uhat.coeffs, nhat);
  for_each_mode(u.grid, [&](std::size_t idx, const Mode& m) { nhat[idx] += -m.k2 * uhat.coeffs[idx]; });
  return inverse_transform(SpectralField{u.grid, std::move(nhat)});
}

RealField perturbation_rhs(double A, const RealField& v, bool dealias) {
  require_finite(v, "perturbation_rhs");
  SpectralField vhat = forward_transform(v);
  QuadraticTerm quad(v.grid, dealias);
  std::vector<cd> nhat;
  quad(vhat.coeffs, nhat);
  const SemigroupSymbol sym(A, v.grid);
  for (std::size_t i = 0; i < nhat.size(); ++i) nhat[i] += -sym.h[i] * vhat.coeffs[i];
  return inverse_transform(SpectralField{v.grid, std::move(nhat)});
}

Trajectory evolve(const RealField& initial, const SolverConfig& config, const ExtraNorm& extra_norm) {
  require_finite(initial, "evolve");
  const Grid& g = initial.grid;

  std::vector<std::string> issues;
  if (config.formulation == Formulation::raw && config.A != 0.0)
    issues.push_back("raw formulation requires A == 0 in the config");
  if (!(config.horizon > 0.0)) issues.push_back("horizon must be positive");
  if (config.record_stride < 1) issues.push_back("record_stride must be >= 1");
  if (config.save_stride < 0) issues.push_back("save_stride must be >= 0");
  const double bound = dt_stability_bound(g, config.formulation == Formulation::raw ? 0.0 : config.A);
  double dt = config.dt;
  if (dt <= 0.0) {
    dt = 0.25 * bound;
  } else if (dt > bound * (1.0 + 1e-9)) {
    issues.push_back("dt exceeds the stability bound " + std::to_string(bound));
  }
  if (!issues.empty()) {
    std::string msg = "evolve: invalid config:";
    for (const auto& s : issues) msg += " [" + s + "]";
    throw std::invalid_argument(msg);
  }

  const long nsteps = std::max(1L, std::lround(std::ceil(config.horizon / dt - 1e-12)));
  dt = config.horizon / static_cast<double>(nsteps);

  const auto lam = linear_rates(g, config.formulation, config.A);
  const std::size_t n = g.size();
  std::vector<double> E(n), p1(n), p2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = lam[i] * dt;
    E[i] = std::exp(z);
    p1[i] = dt * phi1(z);
    p2[i] = dt * phi2(z);
  }

  QuadraticTerm quad(g, config.dealias);
  SpectralField state = forward_transform(initial);
  std::vector<cd> vhat = std::move(state.coeffs);
  const cd mean0 = vhat[0];
  std::vector<cd> n1hat, n2hat, ahat(n);

  Trajectory traj;
  traj.grid = g;
  traj.initial_sup = field_max_abs(initial);
  const double threshold =
      config.blowup_threshold > 0.0 ? config.blowup_threshold : 1e6 * std::max(traj.initial_sup, 1e-300);

  std::vector<cd> tmp;
  std::vector<double> phys;
  long record_count = 0;
  auto record = [&](long step) -> bool {
    const double t = step * dt;
    to_phys(g, vhat, tmp, phys);
    RealField f{g, phys};
    NormSample s = norm_sample(t, f);
    if (extra_norm) s.extra = extra_norm(f);
    traj.series.push_back(s);
    traj.max_mean_drift = std::max(traj.max_mean_drift, std::abs(vhat[0] - mean0));
    const bool bad = !std::isfinite(s.linf) || s.linf > threshold;
    const bool keep_field = (config.save_stride > 0 && record_count % config.save_stride == 0) ||
                            step == 0 || step == nsteps || bad;
    if (keep_field) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(std::move(f));
    }
    ++record_count;
    traj.end_time = t;
    if (bad) {
      traj.outcome = RunOutcome::blowup;
      traj.blowup_time = t;
      return false;
    }
    return true;
  };

  if (!record(0)) return traj;
  for (long step = 1; step <= nsteps; ++step) {
    quad(vhat, n1hat);
    for (std::size_t i = 0; i < n; ++i) ahat[i] = E[i] * vhat[i] + p1[i] * n1hat[i];
    if (config.scheme == Scheme::etd_rk2) {
      quad(ahat, n2hat);
      for (std::size_t i = 0; i < n; ++i) vhat[i] = ahat[i] + p2[i] * (n2hat[i] - n1hat[i]);
    } else {
      vhat.swap(ahat);
    }
    if (step % config.record_stride == 0 || step == nsteps) {
      if (!record(step)) return traj;
    }
  }
  return traj;
}

PositivityReport check_positivity(const Trajectory& traj, double tol) {
  PositivityReport rep;
  rep.threshold = -tol * traj.initial_sup;
  rep.worst_min = 0.0;
  for (const auto& s : traj.series) rep.worst_min = std::min(rep.worst_min, s.min);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& f = traj.snapshots[k];
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.values[i] < rep.threshold)
        rep.violations.push_back({traj.snapshot_times[k], i, f.values[i]});
    }
  }
  rep.pass = rep.worst_min >= rep.threshold;
  return rep;
}

BlowupStatus detect_blowup(const Trajectory& traj) {
  BlowupStatus st;
  if (traj.outcome == RunOutcome::blowup) {
    st.kind = BlowupStatus::Kind::blowup;
    st.t_star = traj.blowup_time;
    return st;
  }
  // Horizon reached: classify an accelerating log(sup) tail as indeterminate.
  const std::size_t m = traj.series.size();
  if (m >= 8) {
    const std::size_t tail = std::max<std::size_t>(4, m / 4);
    const std::size_t lo = m - tail;
    bool growing = true;
    for (std::size_t i = lo + 1; i < m; ++i) {
      if (!(traj.series[i].linf > traj.series[i - 1].linf)) {
        growing = false;
        break;
      }
    }
    if (growing) {
      const double d_first = std::log(traj.series[lo + 1].linf) - std::log(traj.series[lo].linf);
      const double d_last = std::log(traj.series[m - 1].linf) - std::log(traj.series[m - 2].linf);
      if (d_last > 1.2 * d_first && d_last > 0.0) {
        st.kind = BlowupStatus::Kind::indeterminate;
        return st;
      }
    }
  }
  st.kind = BlowupStatus::Kind::global;
  return st;
}

PicardResult picard_solve(double A, const RealField& v0, double T, int max_iter, int substeps,
                          double p, bool dealias) {
  require_finite(v0, "picard_solve");
  if (!(T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
  if (max_iter < 1 || substeps < 2)
    throw std::invalid_argument("picard_solve: need max_iter >= 1 and substeps >= 2");
  const Grid& g = v0.grid;
  const std::size_t n = g.size();
  const int M = substeps;
  const double dtau = T / M;

  const SemigroupSymbol sym(A, g);
  SpectralField v0hat = forward_transform(v0);

  std::vector<std::vector<cd>> base(M + 1), V(M + 1), Vnew(M + 1);
  for (int i = 0; i <= M; ++i) {
    base[i].resize(n);
    const double t = i * dtau;
    for (std::size_t k = 0; k < n; ++k) base[i][k] = std::exp(-t * sym.h[k]) * v0hat.coeffs[k];
    V[i] = base[i];
  }

  const SpectralTables tables(g, dealias);
  const double volume = g.volume();
  auto spectral_l2 = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s * volume);  // Parseval for the quadrature L2 norm
  };
  std::vector<cd> tmp, work(n);
  std::vector<double> physv, physg, prod(n);
  auto lp_dist = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
    if (p == 2.0) return spectral_l2(a, b);
    for (std::size_t k = 0; k < n; ++k) work[k] = a[k] - b[k];
    to_phys(g, work, tmp, physv);
    return lp_norm(RealField{g, physv}, p);
  };

  PicardResult res;
  std::vector<std::array<std::vector<cd>, 2>> Fhat(M + 1);

  for (int iter = 1; iter <= max_iter; ++iter) {
    // F(t_j) = v(t_j) * grad K * v(t_j), componentwise, for the current iterate
    for (int j = 0; j <= M; ++j) {
      for (std::size_t k = 0; k < n; ++k) work[k] = tables.mask[k] * V[j][k];
      to_phys(g, work, tmp, physv);
      for (int a = 0; a < g.dim; ++a) {
        for (std::size_t k = 0; k < n; ++k)
          work[k] = cd(0.0, tables.gradk[a][k]) * tables.mask[k] * V[j][k];
        to_phys(g, work, tmp, physg);
        for (std::size_t k = 0; k < n; ++k) prod[k] = physv[k] * physg[k];
        to_hat(g, prod, tmp, Fhat[j][a]);
      }
    }
    // v^{m+1}(t_i) = S(t_i) v0 - sum_j w_j grad S(t_i - t_j) . F(t_j)
    double dist = 0.0;
    for (int i = 0; i <= M; ++i) {
      Vnew[i] = base[i];
      for (int j = 0; j <= i && i > 0; ++j) {
        const double w = dtau * ((j == 0 || j == i) ? 0.5 : 1.0);
        const double dt_ij = (i - j) * dtau;
        for (std::size_t k = 0; k < n; ++k) {
          const double decay = std::exp(-dt_ij * sym.h[k]);
          cd acc(0.0, 0.0);
          for (int a = 0; a < g.dim; ++a) acc += cd(0.0, tables.kvec[a][k]) * Fhat[j][a][k];
          Vnew[i][k] -= w * decay * tables.mask[k] * acc;
        }
      }
      dist = std::max(dist, lp_dist(Vnew[i], V[i]));
    }
    V.swap(Vnew);
    res.distances.push_back(dist);
    res.iterations = iter;
    if (res.distances.size() >= 2) {
      const double prev = res.distances[res.distances.size() - 2];
      res.ratios.push_back(prev > 0.0 ? dist / prev : 0.0);
    }
    if (dist <= 1e-13 * std::max(lp_norm(v0, p), 1e-300)) {
      res.converged = true;
      break;
    }
  }
  res.contractive = true;
  for (double r : res.ratios) {
    if (r >= 1.0) res.contractive = false;
  }
  res.final_state = inverse_transform(SpectralField{g, V[M]});
  return res;
}

}  // namespace kslab
