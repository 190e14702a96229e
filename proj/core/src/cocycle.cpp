#include "hn/cocycle.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "hn/parallel.hpp"

namespace hn {

void set_threads(int n);  // defined below with the helpers

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads.store(n); }

int effective_threads() {
  int n = g_threads.load();
  if (n <= 0) {
    if (const char* env = std::getenv("HN_SPECTRA_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  int nt = effective_threads();
  if (nt <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double Mat2::frob() const {
  return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
}

Mat2 Mat2::inverse() const {
  cplx det = a * d - b * c;
  return {d / det, -b / det, -c / det, a / det};
}

Mat2 schrodinger_step(cplx v, cplx E) { return {v - E, cplx(-1.0), cplx(1.0), cplx(0.0)}; }

Mat2 hatano_nelson_step(cplx v, cplx E, double g) {
  double eg = std::exp(-g);
  return {eg * (v - E), cplx(-eg * eg), cplx(1.0), cplx(0.0)};
}

void ProductAccumulator::multiply_left(const Mat2& m) {
  current = m * current;
  ++steps;
  double nrm = current.frob();
  if (nrm > 2.0 || nrm < 0.5) {
    current.a /= nrm;
    current.b /= nrm;
    current.c /= nrm;
    current.d /= nrm;
    log_scale += std::log(nrm);
  }
}

double ProductAccumulator::log_norm() const { return log_scale + std::log(current.frob()); }

Mat2 ProductAccumulator::reconstruct() const {
  double s = std::exp(log_scale);
  return {current.a * s, current.b * s, current.c * s, current.d * s};
}

ProductAccumulator transfer_product(const BaseSystem& base, const Potential& p, cplx E,
                                    double g, const Phase& x0, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("transfer_product: n must be >= 0");
  ProductAccumulator acc;
  constexpr std::int64_t kChunk = 4096;
  std::vector<cplx> buf(static_cast<std::size_t>(std::min(n, kChunk)));
  for (std::int64_t k0 = 0; k0 < n; k0 += kChunk) {
    std::int64_t m = std::min(kChunk, n - k0);
    potential_sequence(p, base, x0, k0, static_cast<std::size_t>(m), buf.data());
    if (g == 0.0) {
      for (std::int64_t j = 0; j < m; ++j)
        acc.multiply_left(schrodinger_step(buf[static_cast<std::size_t>(j)], E));
    } else {
      for (std::int64_t j = 0; j < m; ++j)
        acc.multiply_left(hatano_nelson_step(buf[static_cast<std::size_t>(j)], E, g));
    }
  }
  return acc;
}

namespace {

struct OrbitValue {
  double full = 0.0;
  double half = 0.0;
};

// (1/n) log||A_n|| along one orbit, with the value at n/2 recorded for the
// convergence check. The potential sequence may be supplied precomputed.
OrbitValue orbit_log_norm(const cplx* v, std::int64_t n, cplx E, double g) {
  ProductAccumulator acc;
  double half = 0.0;
  std::int64_t nh = n / 2;
  if (g == 0.0) {
    for (std::int64_t k = 0; k < n; ++k) {
      acc.multiply_left(schrodinger_step(v[k], E));
      if (k + 1 == nh) half = acc.log_norm() / static_cast<double>(nh);
    }
  } else {
    for (std::int64_t k = 0; k < n; ++k) {
      acc.multiply_left(hatano_nelson_step(v[k], E, g));
      if (k + 1 == nh) half = acc.log_norm() / static_cast<double>(nh);
    }
  }
  return {acc.log_norm() / static_cast<double>(n), half};
}

}  // namespace

LyapunovEstimate lyapunov(const BaseSystem& base, const Potential& p, cplx E, double g,
                          const LyapunovCfg& cfg) {
  if (cfg.n_steps < 1000) throw std::invalid_argument("lyapunov: n_steps must be >= 1000");
  if (cfg.n_phases < 1) throw std::invalid_argument("lyapunov: n_phases must be >= 1");
  std::vector<cplx> buf(static_cast<std::size_t>(cfg.n_steps));
  double sum = 0.0, sum2 = 0.0, half_sum = 0.0;
  for (int j = 0; j < cfg.n_phases; ++j) {
    Phase x0 = advance(base, averaging_phase(base, j, cfg.n_phases), cfg.burn_in);
    potential_sequence(p, base, x0, 0, buf.size(), buf.data());
    OrbitValue ov = orbit_log_norm(buf.data(), cfg.n_steps, E, g);
    sum += ov.full;
    sum2 += ov.full * ov.full;
    half_sum += ov.half;
  }
  LyapunovEstimate est;
  est.value = sum / cfg.n_phases;
  double var = sum2 / cfg.n_phases - est.value * est.value;
  est.stderr_ = var > 0.0 ? std::sqrt(var) : 0.0;
  if (cfg.check_convergence) {
    // Allow the O(1/n) finite-orbit bias between the half and full horizon.
    double drift = std::abs(est.value - half_sum / cfg.n_phases);
    est.converged = drift <= 10.0 * est.stderr_ + 200.0 / static_cast<double>(cfg.n_steps);
  }
  return est;
}

LyapunovField lyapunov_field(const BaseSystem& base, const Potential& p,
                             const GridSpec& grid, const LyapunovCfg& cfg) {
  if (grid.nx < 2 || grid.ny < 2)
    throw std::invalid_argument("lyapunov_field: nx, ny must be >= 2");
  // One potential orbit per averaging phase, shared by every grid node.
  std::vector<std::vector<cplx>> seqs(static_cast<std::size_t>(cfg.n_phases));
  for (int j = 0; j < cfg.n_phases; ++j) {
    seqs[j].resize(static_cast<std::size_t>(cfg.n_steps));
    Phase x0 = advance(base, averaging_phase(base, j, cfg.n_phases), cfg.burn_in);
    potential_sequence(p, base, x0, 0, seqs[j].size(), seqs[j].data());
  }
  LyapunovField f;
  f.grid = grid;
  std::size_t total = static_cast<std::size_t>(grid.nx) * grid.ny;
  f.value.assign(total, 0.0);
  f.stderr_.assign(total, 0.0);
  f.flag.assign(total, 0);
  parallel_for(static_cast<std::int64_t>(total), [&](std::int64_t idx) {
    int i = static_cast<int>(idx % grid.nx);
    int j = static_cast<int>(idx / grid.nx);
    cplx E = grid.node(i, j);
    double sum = 0.0, sum2 = 0.0, half_sum = 0.0;
    for (int ph = 0; ph < cfg.n_phases; ++ph) {
      OrbitValue ov = orbit_log_norm(seqs[ph].data(), cfg.n_steps, E, 0.0);
      sum += ov.full;
      sum2 += ov.full * ov.full;
      half_sum += ov.half;
    }
    double mean = sum / cfg.n_phases;
    double var = sum2 / cfg.n_phases - mean * mean;
    double sd = var > 0.0 ? std::sqrt(var) : 0.0;
    f.value[static_cast<std::size_t>(idx)] = mean;
    f.stderr_[static_cast<std::size_t>(idx)] = sd;
    if (cfg.check_convergence &&
        std::abs(mean - half_sum / cfg.n_phases) >
            10.0 * sd + 200.0 / static_cast<double>(cfg.n_steps))
      f.flag[static_cast<std::size_t>(idx)] = 1;
  });
  return f;
}

double projective_dist(const std::array<cplx, 2>& u, const std::array<cplx, 2>& v) {
  double nu = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
  double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  cplx ip = std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1];
  double c = std::abs(ip) / (nu * nv);
  double s2 = 1.0 - c * c;
  return s2 > 0.0 ? std::sqrt(s2) : 0.0;
}

namespace {

void normalize(std::array<cplx, 2>& v) {
  double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  v[0] /= n;
  v[1] /= n;
}

const std::array<std::array<cplx, 2>, 4> kFan = {{{cplx(1.0), cplx(0.0)},
                                                  {cplx(0.0), cplx(1.0)},
                                                  {cplx(M_SQRT1_2), cplx(M_SQRT1_2)},
                                                  {cplx(M_SQRT1_2), cplx(0.0, M_SQRT1_2)}}};

struct UHPassResult {
  double fwd_diam = 0.0, bwd_diam = 0.0;
  double min_angle = 1e300;
  double growth = 0.0;
  std::array<cplx, 2> unstable{}, stable{};
};

// One phase, one horizon. Unstable direction by pushing a fan forward from
// T^{-N}x0; stable by pulling a fan back from T^{N}x0. Both iterations are
// self-correcting. The sections are then swept along `section_steps` sites
// (forward push for u, backward pull for s) and the minimal angle recorded.
UHPassResult uh_pass(const BaseSystem& base, const Potential& p, cplx E, const Phase& x0,
                     std::int64_t N, std::int64_t M) {
  UHPassResult r;
  std::vector<cplx> v(static_cast<std::size_t>(N + M + 1));

  // Forward: potentials on [-N, M].
  potential_sequence(p, base, x0, -N, v.size(), v.data());
  std::array<std::array<cplx, 2>, 4> fwd = kFan;
  ProductAccumulator growth_acc;
  for (std::int64_t k = 0; k < N; ++k) {
    Mat2 s = schrodinger_step(v[static_cast<std::size_t>(k)], E);
    for (auto& w : fwd) {
      w = s.apply(w);
      normalize(w);
    }
  }
  // Growth rate of the matrix product over [x0, T^N x0).
  {
    ProductAccumulator acc;
    for (std::int64_t k = 0; k < N; ++k)
      acc.multiply_left(schrodinger_step(v[static_cast<std::size_t>(N + k)], E));
    growth_acc = acc;
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      r.fwd_diam = std::max(r.fwd_diam, projective_dist(fwd[i], fwd[j]));
  r.unstable = fwd[0];

  // Backward: pull a fan from T^{N+M} x0 down to x0, recording the stable
  // direction at every site in [0, M] on the way.
  std::vector<cplx> v2(static_cast<std::size_t>(N + M));
  potential_sequence(p, base, x0, 0, v2.size(), v2.data());
  std::array<std::array<cplx, 2>, 4> bwd = kFan;
  std::vector<std::array<cplx, 2>> stable_at(static_cast<std::size_t>(M + 1));
  for (std::int64_t k = N + M - 1; k >= 0; --k) {
    Mat2 s = schrodinger_step(v2[static_cast<std::size_t>(k)], E).inverse();
    for (auto& w : bwd) {
      w = s.apply(w);
      normalize(w);
    }
    if (k <= M) stable_at[static_cast<std::size_t>(k)] = bwd[0];
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      r.bwd_diam = std::max(r.bwd_diam, projective_dist(bwd[i], bwd[j]));
  r.stable = stable_at[0];

  // Sweep the unstable direction forward along [0, M] against the stable one.
  std::array<cplx, 2> u = fwd[0];
  for (std::int64_t k = 0; k <= M; ++k) {
    double ang = std::asin(std::min(1.0, projective_dist(u, stable_at[static_cast<std::size_t>(k)])));
    r.min_angle = std::min(r.min_angle, ang);
    if (k < M) {
      u = schrodinger_step(v2[static_cast<std::size_t>(k)], E).apply(u);
      normalize(u);
    }
  }
  r.growth = growth_acc.log_norm() / static_cast<double>(N);
  return r;
}

}  // namespace

UHCertificate uh_test(const BaseSystem& base, const Potential& p, cplx E, const UHCfg& cfg) {
  UHCertificate cert;
  for (std::int64_t N = cfg.horizon; N <= cfg.horizon_max; N *= 2) {
    cert = UHCertificate{};
    cert.horizon_used = N;
    cert.min_angle = 1e300;
    double growth_sum = 0.0;
    for (int j = 0; j < cfg.n_phases; ++j) {
      Phase x0 = averaging_phase(base, j, cfg.n_phases);
      UHPassResult r = uh_pass(base, p, E, x0, N, cfg.section_steps);
      cert.fwd_diameter = std::max(cert.fwd_diameter, r.fwd_diam);
      cert.bwd_diameter = std::max(cert.bwd_diameter, r.bwd_diam);
      cert.min_angle = std::min(cert.min_angle, r.min_angle);
      growth_sum += r.growth;
      cert.unstable_section.push_back(r.unstable);
      cert.stable_section.push_back(r.stable);
    }
    cert.growth_rate = growth_sum / cfg.n_phases;
    bool contracted = cert.fwd_diameter < cfg.dir_tol && cert.bwd_diameter < cfg.dir_tol;
    if (contracted && cert.min_angle > cfg.angle_floor && cert.growth_rate > cfg.growth_floor) {
      cert.verdict = UHVerdict::uniformly_hyperbolic;
      return cert;
    }
    if (cert.growth_rate < cfg.growth_floor) {
      cert.verdict = UHVerdict::not_uh;
      return cert;
    }
    cert.verdict = UHVerdict::inconclusive;
  }
  return cert;
}

}  // namespace hn
