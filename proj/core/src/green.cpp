#include "hn/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hn {

namespace {

constexpr double kLogFloor = -690.0;  // below this, store exact 0 with a flag

struct ScaledVec {
  std::array<cplx, 2> v{cplx(1.0), cplx(0.0)};
  double log_scale = 0.0;

  void renorm() {
    double m = std::max(std::abs(v[0]), std::abs(v[1]));
    if (m > 1e100 || (m < 1e-100 && m > 0.0)) {
      v[0] /= m;
      v[1] /= m;
      log_scale += std::log(m);
    }
  }
  void step(const Mat2& s) {
    v = s.apply(v);
    renorm();
  }
};

// v(T^k x0) for k in [k_lo, k_hi], indexable by k.
struct VRange {
  std::int64_t k_lo;
  std::vector<cplx> vals;
  cplx operator()(std::int64_t k) const { return vals[static_cast<std::size_t>(k - k_lo)]; }
};

VRange v_range(const BaseSystem& base, const Potential& p, const Phase& x0,
               std::int64_t k_lo, std::int64_t k_hi) {
  VRange r;
  r.k_lo = k_lo;
  r.vals.resize(static_cast<std::size_t>(k_hi - k_lo + 1));
  potential_sequence(p, base, x0, k_lo, r.vals.size(), r.vals.data());
  return r;
}

cplx from_log(double log_mag, double arg, std::vector<char>& flags, std::size_t k) {
  if (log_mag < kLogFloor) {
    flags[k] = 1;
    return cplx(0.0);
  }
  return std::polar(std::exp(log_mag), arg);
}

}  // namespace

GreenWindow green_forward(const BaseSystem& base, const Potential& p, const Phase& x0,
                          cplx E, double g, int W, const GreenCfg& cfg) {
  if (W < 2) throw std::invalid_argument("green_forward: W must be at least 2");
  LyapunovEstimate est = lyapunov(base, p, E, 0.0, cfg.lyap);
  double margin = std::max(cfg.margin, 3.0 * est.stderr_);
  if (est.value >= g - margin)
    throw std::invalid_argument("green_forward: L(E) not below g by the required margin");

  GreenWindow gw;
  gw.W = W;
  gw.regime = GreenRegime::E_minus_forward;
  gw.E = E;
  gw.g = g;
  gw.L = est.value;
  int side = 2 * W + 1;
  gw.entries.assign(static_cast<std::size_t>(side) * side, cplx(0.0));
  gw.underflow.assign(gw.entries.size(), 0);

  VRange v = v_range(base, p, x0, -W, W);
  for (int n = -W; n < W; ++n) {
    // state at site m: (phi_m, phi_{m-1}) up to exp(log_scale)
    ScaledVec s;
    s.v = {std::exp(-g), cplx(0.0)};
    s.log_scale = 0.0;
    for (int m = n + 1; m <= W; ++m) {
      double lm = s.log_scale + std::log(std::abs(s.v[0]) + 1e-320);
      gw.entries[gw.idx(m, n)] =
          -from_log(lm, std::arg(s.v[0]), gw.underflow, gw.idx(m, n));
      if (m < W) s.step(hatano_nelson_step(v(m), E, g));
    }
  }
  return gw;
}

GreenWindow green_hyperbolic(const BaseSystem& base, const Potential& p, const Phase& x0,
                             cplx E, double g, int W, const GreenCfg& cfg) {
  if (W < 2) throw std::invalid_argument("green_hyperbolic: W must be at least 2");
  LyapunovEstimate est = lyapunov(base, p, E, 0.0, cfg.lyap);
  double margin = std::max(cfg.margin, 3.0 * est.stderr_);
  if (est.value <= g + margin)
    throw std::invalid_argument("green_hyperbolic: L(E) not above g by the required margin");
  UHCertificate cert = uh_test(base, p, E, cfg.uh);
  if (cert.verdict != UHVerdict::uniformly_hyperbolic)
    throw std::invalid_argument("green_hyperbolic: uniform hyperbolicity not certified");
  if (cert.min_angle < cfg.uh.angle_floor)
    throw std::invalid_argument("green_hyperbolic: stable/unstable angle below floor");

  std::int64_t N = cfg.warmup;
  VRange v = v_range(base, p, x0, -W - N, W + N);

  // Unstable direction proxy at -W: push a generic vector forward N steps.
  ScaledVec um;
  um.v = {cplx(1.0), cplx(0.0)};
  for (std::int64_t m = -W - N; m < -W; ++m) um.step(schrodinger_step(v(m), E));
  um.log_scale = 0.0;

  // Stable direction proxy at W: pull a generic vector back N steps.
  ScaledVec sp;
  sp.v = {cplx(1.0), cplx(0.7)};
  for (std::int64_t m = W + N - 1; m >= W; --m) sp.step(schrodinger_step(v(m), E).inverse());
  sp.log_scale = 0.0;

  int side = 2 * W + 1;
  std::vector<std::array<cplx, 2>> minus(static_cast<std::size_t>(side));
  std::vector<std::array<cplx, 2>> plus(static_cast<std::size_t>(side));
  std::vector<double> sig_minus(static_cast<std::size_t>(side));
  std::vector<double> sig_plus(static_cast<std::size_t>(side));

  for (int m = -W; m <= W; ++m) {
    minus[static_cast<std::size_t>(m + W)] = um.v;
    sig_minus[static_cast<std::size_t>(m + W)] = um.log_scale;
    if (m < W) um.step(schrodinger_step(v(m), E));
  }
  for (int m = W; m >= -W; --m) {
    plus[static_cast<std::size_t>(m + W)] = sp.v;
    sig_plus[static_cast<std::size_t>(m + W)] = sp.log_scale;
    if (m > -W) sp.step(schrodinger_step(v(m - 1), E).inverse());
  }

  // Wronskian at the window center; constant for the det-1 cocycle.
  const auto& a0 = minus[static_cast<std::size_t>(W)];
  const auto& b0 = plus[static_cast<std::size_t>(W)];
  cplx det0 = a0[0] * b0[1] - a0[1] * b0[0];
  if (std::abs(det0) < 1e-200)
    throw std::runtime_error("green_hyperbolic: degenerate stable/unstable pair");
  double det_log = std::log(std::abs(det0)) + sig_minus[static_cast<std::size_t>(W)] +
                   sig_plus[static_cast<std::size_t>(W)];
  double det_arg = std::arg(det0);

  GreenWindow gw;
  gw.W = W;
  gw.regime = GreenRegime::E_plus_hyperbolic;
  gw.E = E;
  gw.g = g;
  gw.L = est.value;
  gw.entries.assign(static_cast<std::size_t>(side) * side, cplx(0.0));
  gw.underflow.assign(gw.entries.size(), 0);

  for (int m = -W; m <= W; ++m) {
    for (int n = -W; n <= W; ++n) {
      int a = std::min(m, n), b = std::max(m, n);
      cplx pa = minus[static_cast<std::size_t>(a + W)][0];
      cplx pb = plus[static_cast<std::size_t>(b + W)][0];
      double log_mag = (n - m) * g + std::log(std::abs(pa) + 1e-320) +
                       std::log(std::abs(pb) + 1e-320) +
                       sig_minus[static_cast<std::size_t>(a + W)] +
                       sig_plus[static_cast<std::size_t>(b + W)] - det_log;
      double arg = std::arg(pa) + std::arg(pb) - det_arg;
      gw.entries[gw.idx(m, n)] = from_log(log_mag, arg, gw.underflow, gw.idx(m, n));
    }
  }
  return gw;
}

DecayFit decay_fit(const GreenWindow& gw) {
  DecayFit fit;
  auto side_fit = [&](int sign, double& rate, bool& insufficient, bool want_prefactor) {
    // least squares of log|G| against distance d = sign*(m-n) > 0
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    std::vector<char> seen(static_cast<std::size_t>(2 * gw.W + 1), 0);
    for (int m = -gw.W; m <= gw.W; ++m) {
      for (int n = -gw.W; n <= gw.W; ++n) {
        int d = sign * (m - n);
        if (d <= 0) continue;
        double mag = std::abs(gw.at(m, n));
        if (mag <= 1e-14) continue;
        double x = d, y = std::log(mag);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
        seen[static_cast<std::size_t>(d)] = 1;
      }
    }
    std::size_t distinct = 0;
    for (char c : seen) distinct += c;
    if (distinct < 10) {
      insufficient = true;
      rate = 0.0;
      return;
    }
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    rate = -slope;
    if (want_prefactor) fit.prefactor = std::exp((sy - slope * sx) / cnt);
  };
  side_fit(+1, fit.rate_right, fit.insufficient_right, true);
  side_fit(-1, fit.rate_left, fit.insufficient_left, false);
  return fit;
}

double inverse_residual(const GreenWindow& gw, const BaseSystem& base, const Potential& p,
                        const Phase& x0) {
  VRange v = v_range(base, p, x0, -gw.W, gw.W);
  double eg = std::exp(gw.g), emg = std::exp(-gw.g);
  double worst = 0.0;
  for (int m = -gw.W + 1; m <= gw.W - 1; ++m) {
    for (int n = -gw.W; n <= gw.W; ++n) {
      cplx r = -eg * gw.at(m + 1, n) - emg * gw.at(m - 1, n) +
               (v(m) - gw.E) * gw.at(m, n);
      if (m == n) r -= 1.0;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

void write_green_csv(const GreenWindow& gw, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "m,n,re,im\n");
  for (int m = -gw.W; m <= gw.W; ++m)
    for (int n = -gw.W; n <= gw.W; ++n) {
      cplx z = gw.at(m, n);
      std::fprintf(f, "%d,%d,%.17g,%.17g\n", m, n, z.real(), z.imag());
    }
  std::fclose(f);
}

}  // namespace hn
