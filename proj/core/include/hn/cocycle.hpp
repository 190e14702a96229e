#ifndef HN_COCYCLE_HPP
#define HN_COCYCLE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "hn/dynamics.hpp"
#include "hn/grid.hpp"

namespace hn {

// 2x2 complex matrix, row major: (a b; c d).
struct Mat2 {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mat2 identity() { return {}; }
  Mat2 operator*(const Mat2& r) const {
    return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
  }
  std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const {
    return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
  }
  cplx det() const { return a * d - b * c; }
  double frob() const;
  Mat2 inverse() const;
};

// Schroedinger one-step matrix ((v-E, -1), (1, 0)); det = 1 exactly.
Mat2 schrodinger_step(cplx v, cplx E);
// Hatano-Nelson one-step matrix ((e^{-g}(v-E), -e^{-2g}), (1, 0)).
Mat2 hatano_nelson_step(cplx v, cplx E, double g);

// Scaled matrix product: true product = current * exp(log_scale).
struct ProductAccumulator {
  Mat2 current;
  double log_scale = 0.0;
  std::int64_t steps = 0;

  void multiply_left(const Mat2& m);
  double log_norm() const;  // log || product ||_F
  // Entrywise product with the scale folded back in; overflows for large
  // log_scale, intended for small-n oracle comparisons.
  Mat2 reconstruct() const;
};

ProductAccumulator transfer_product(const BaseSystem& base, const Potential& p, cplx E,
                                    double g, const Phase& x0, std::int64_t n);

struct LyapunovCfg {
  std::int64_t n_steps = 100000;
  int n_phases = 8;
  std::int64_t burn_in = 0;
  bool check_convergence = true;
};

struct LyapunovEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  bool converged = true;  // false when the half-horizon value moved > 10*stderr
};

LyapunovEstimate lyapunov(const BaseSystem& base, const Potential& p, cplx E, double g,
                          const LyapunovCfg& cfg);

// L_0(E) over a grid (the classification folds g in downstream).
LyapunovField lyapunov_field(const BaseSystem& base, const Potential& p,
                             const GridSpec& grid, const LyapunovCfg& cfg);

enum class UHVerdict { uniformly_hyperbolic, not_uh, inconclusive };

struct UHCfg {
  int n_phases = 4;
  std::int64_t horizon = 2048;        // warmup length, doubled up to horizon_max
  std::int64_t horizon_max = 65536;
  std::int64_t section_steps = 8192;  // orbit length scanned for section angles
  double dir_tol = 1e-6;
  double angle_floor = 1e-3;
  double growth_floor = 1e-3;
};

struct UHCertificate {
  UHVerdict verdict = UHVerdict::inconclusive;
  double min_angle = 0.0;   // radians, min over phases and orbit samples
  double growth_rate = 0.0; // (1/N) log ||A_N||
  double fwd_diameter = 0.0, bwd_diameter = 0.0;  // projective fan diameters
  std::int64_t horizon_used = 0;
  // Sampled sections at the probe phases (projective, unit vectors).
  std::vector<std::array<cplx, 2>> unstable_section, stable_section;
};

UHCertificate uh_test(const BaseSystem& base, const Potential& p, cplx E,
                      const UHCfg& cfg = {});

// Projective distance: sin of the angle between complex lines.
double projective_dist(const std::array<cplx, 2>& u, const std::array<cplx, 2>& v);

}  // namespace hn

#endif
