#ifndef HN_DYNAMICS_HPP
#define HN_DYNAMICS_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hn {

using cplx = std::complex<double>;

// Torus coordinates are kept as 64-bit fixed-point fractions so that
// mod-1 arithmetic is exact and orbits are exactly invertible.
// The frequency supplied as a double is quantized to a multiple of 2^-64.
constexpr double kTorusScale = 1.0 / 18446744073709551616.0;  // 2^-64

inline std::uint64_t to_fixed(double x) {
  double f = x - std::floor(x);
  return static_cast<std::uint64_t>(f * 18446744073709551616.0);
}

inline double to_unit(std::uint64_t x) { return static_cast<double>(x) * kTorusScale; }

enum class BaseKind { rotation, skew_shift, periodic, iid };

// Orbit point: initial torus coordinates plus a step counter. Positions are
// computed in closed form from (x, y, k), so advancing n steps and stepping
// back n steps recovers the initial point bit for bit.
struct Phase {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::int64_t k = 0;
};

struct BaseSystem {
  BaseKind kind = BaseKind::rotation;
  double alpha = 0.0;           // rotation / skew_shift frequency as given
  std::uint64_t alpha_fp = 0;   // quantized frequency
  std::int64_t period = 1;      // periodic kind
  std::uint64_t seed = 0;       // iid kind
  double iid_halfwidth = 1.0;   // iid values uniform on [-lambda, lambda]
  Phase initial_phase;

  static BaseSystem rotation(double alpha, double x0 = 0.0);
  static BaseSystem skew_shift(double alpha, double x0 = 0.0, double y0 = 0.0);
  static BaseSystem periodic(std::int64_t p, std::int64_t k0 = 0);
  static BaseSystem iid(std::uint64_t seed, double lambda);
};

// T^n applied to a phase (any integer n, including negative).
Phase advance(const BaseSystem& base, const Phase& p, std::int64_t n);

// Reduced coordinates of a phase in [0,1).
double coord_x(const BaseSystem& base, const Phase& p);
double coord_y(const BaseSystem& base, const Phase& p);
// The scalar fed to the potential: x for rotation/periodic, the accumulating
// second coordinate for skew_shift, the stream index for iid.
double sample_coordinate(const BaseSystem& base, const Phase& p);
// The iid stream value at the phase's index.
double iid_value(const BaseSystem& base, std::int64_t index);

std::vector<Phase> orbit(const BaseSystem& base, const Phase& x0,
                         std::int64_t n_from, std::int64_t n_to);

enum class PotentialForm { fourier, cosine, single_exponential, constant, iid_diagonal };

struct Potential {
  PotentialForm form = PotentialForm::constant;
  std::map<int, cplx> coeffs;       // fourier
  double lambda = 0.0;              // cosine: v(x) = 2*lambda*cos(2 pi x)
  cplx lambda_c = 0.0;              // single_exponential: v(x) = lambda*e^{2 pi i x}
  cplx constant = 0.0;
  double imaginary_shift = 0.0;     // evaluate at x + i*y

  static Potential zero() { return Potential{}; }
  static Potential cosine(double lambda, double y = 0.0);
  static Potential single_exponential(cplx lambda, double y = 0.0);
  static Potential constant_v(cplx c);
  static Potential fourier(std::map<int, cplx> coeffs, double y = 0.0);
  static Potential iid_diagonal();

  // True when v restricted to y=0 is real-valued.
  bool real_valued() const;
  // sup |v| over the phase space (used for spectral window bounds).
  double sup_abs() const;
};

cplx sample_potential(const Potential& p, const BaseSystem& base, const Phase& phase);

// Fills out[j] = v(T^{k0+j} x0) for j in [0, count). Sequential fast path
// shared by the cocycle loops.
void potential_sequence(const Potential& p, const BaseSystem& base, const Phase& x0,
                        std::int64_t k0, std::size_t count, cplx* out);

// A starting phase for averaging: the initial phase translated by j/m on the
// torus (seed offset for iid).
Phase averaging_phase(const BaseSystem& base, int j, int m);

}  // namespace hn

#endif
