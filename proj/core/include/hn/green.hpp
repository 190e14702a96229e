#ifndef HN_GREEN_HPP
#define HN_GREEN_HPP

#include <string>
#include <vector>

#include "hn/cocycle.hpp"
#include "hn/dynamics.hpp"

namespace hn {

enum class GreenRegime { E_minus_forward, E_plus_hyperbolic };

// Green's function G(m,n) on the index window [-W, W].
struct GreenWindow {
  int W = 0;
  GreenRegime regime = GreenRegime::E_minus_forward;
  cplx E;
  double g = 0.0;
  double L = 0.0;                // Lyapunov estimate used for the regime check
  std::vector<cplx> entries;     // (2W+1)^2, row-major in (m, n)
  std::vector<char> underflow;   // exact zeros produced by scale cutoff

  std::size_t idx(int m, int n) const {
    return static_cast<std::size_t>(m + W) * (2 * W + 1) + (n + W);
  }
  cplx at(int m, int n) const { return entries[idx(m, n)]; }
};

struct GreenCfg {
  double margin = 0.0;          // extra |L - g| separation; 0 -> 3 * stderr only
  std::int64_t warmup = 2048;   // one-sided push length for the direction proxies
  LyapunovCfg lyap;
  UHCfg uh;
  GreenCfg() {
    lyap.n_steps = 20000;
    lyap.n_phases = 4;
    uh.horizon = 2048;
    uh.horizon_max = 16384;
    uh.section_steps = 4096;
  }
};

// Triangular construction: G(m,n) = -phi^n_m for m >= n+1, zero for m <= n,
// from the recurrence with phi^n_n = 0, phi^n_{n+1} = e^{-g}. Valid when
// L(E) < g - margin.
GreenWindow green_forward(const BaseSystem& base, const Potential& p, const Phase& x0,
                          cplx E, double g, int W, const GreenCfg& cfg = {});

// Two-sided construction from stable/unstable solutions of the g=0 cocycle:
// G(m,n) = e^{(n-m)g} phi^-_{min} phi^+_{max} / det. Valid when the g=0
// cocycle is uniformly hyperbolic at E and L(E) > g + margin.
GreenWindow green_hyperbolic(const BaseSystem& base, const Potential& p, const Phase& x0,
                             cplx E, double g, int W, const GreenCfg& cfg = {});

struct DecayFit {
  double rate_right = 0.0;  // decay exponent for m - n > 0
  double rate_left = 0.0;   // decay exponent for n - m > 0
  double prefactor = 0.0;
  bool insufficient_right = false;
  bool insufficient_left = false;
};

DecayFit decay_fit(const GreenWindow& gw);

// Max |((H(g) - E) G)(m, n) - delta_{mn}| over interior rows m.
double inverse_residual(const GreenWindow& gw, const BaseSystem& base, const Potential& p,
                        const Phase& x0);

void write_green_csv(const GreenWindow& gw, const std::string& path);

}  // namespace hn

#endif
