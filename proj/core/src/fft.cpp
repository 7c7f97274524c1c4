#include "fft_backend.hpp"

#include <fftw3.h>

#include <array>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace kslab::detail {
namespace {

struct Plan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  Plan() = default;
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using Key = std::array<int, 4>;  // dim, n0, n1, sign

// Plans are confined to the calling thread; only creation goes through the
// (non-thread-safe) FFTW planner under a global lock.
Plan& cached_plan(const Grid& g, int sign) {
  thread_local std::map<Key, std::unique_ptr<Plan>> cache;
  const Key key{g.dim, g.points[0], g.dim == 2 ? g.points[1] : 1, sign};
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto p = std::make_unique<Plan>();
    p->n = g.size();
    p->in = fftw_alloc_complex(p->n);
    p->out = fftw_alloc_complex(p->n);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      // FFTW_ESTIMATE keeps planning deterministic run to run.
      if (g.dim == 1) {
        p->plan = fftw_plan_dft_1d(g.points[0], p->in, p->out,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
      } else {
        p->plan = fftw_plan_dft_2d(g.points[0], g.points[1], p->in, p->out,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
      }
    }
    it = cache.emplace(key, std::move(p)).first;
  }
  return *it->second;
}

}  // namespace

void dft(const Grid& g, const std::complex<double>* in, std::complex<double>* out, int sign) {
  Plan& p = cached_plan(g, sign);
  // std::complex<double> is layout-compatible with fftw_complex (double[2])
  std::memcpy(static_cast<void*>(p.in), static_cast<const void*>(in), p.n * sizeof(fftw_complex));
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(out), static_cast<const void*>(p.out), p.n * sizeof(fftw_complex));
}

}  // namespace kslab::detail
