#include "hn/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hn {

namespace {

// SplitMix64: counter-based, so the iid stream is identical regardless of
// access order or direction.
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// k*(k-1)/2 mod 2^64, exact (the product is always even).
std::uint64_t triangular_mod(std::int64_t k) {
  std::int64_t a = k, b = k - 1;
  if (a % 2 == 0) a /= 2; else b /= 2;
  return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
}

}  // namespace

BaseSystem BaseSystem::rotation(double alpha, double x0) {
  BaseSystem b;
  b.kind = BaseKind::rotation;
  b.alpha = alpha;
  b.alpha_fp = to_fixed(alpha);
  b.initial_phase.x = to_fixed(x0);
  return b;
}

BaseSystem BaseSystem::skew_shift(double alpha, double x0, double y0) {
  BaseSystem b;
  b.kind = BaseKind::skew_shift;
  b.alpha = alpha;
  b.alpha_fp = to_fixed(alpha);
  b.initial_phase.x = to_fixed(x0);
  b.initial_phase.y = to_fixed(y0);
  return b;
}

BaseSystem BaseSystem::periodic(std::int64_t p, std::int64_t k0) {
  if (p < 1) throw std::invalid_argument("periodic base: period must be >= 1");
  BaseSystem b;
  b.kind = BaseKind::periodic;
  b.period = p;
  b.initial_phase.k = 0;
  b.initial_phase.x = static_cast<std::uint64_t>(floor_mod(k0, p));
  return b;
}

BaseSystem BaseSystem::iid(std::uint64_t seed, double lambda) {
  BaseSystem b;
  b.kind = BaseKind::iid;
  b.seed = seed;
  b.iid_halfwidth = lambda;
  return b;
}

Phase advance(const BaseSystem&, const Phase& p, std::int64_t n) {
  Phase q = p;
  q.k = p.k + n;
  return q;
}

double coord_x(const BaseSystem& base, const Phase& p) {
  switch (base.kind) {
    case BaseKind::rotation:
    case BaseKind::skew_shift:
      return to_unit(p.x + static_cast<std::uint64_t>(p.k) * base.alpha_fp);
    case BaseKind::periodic: {
      std::int64_t idx = floor_mod(static_cast<std::int64_t>(p.x) + p.k, base.period);
      return static_cast<double>(idx) / static_cast<double>(base.period);
    }
    case BaseKind::iid:
      return 0.0;
  }
  return 0.0;
}

double coord_y(const BaseSystem& base, const Phase& p) {
  if (base.kind != BaseKind::skew_shift) return 0.0;
  // T(x,y) = (x+alpha, y+x):  y_k = y0 + k*x0 + C(k,2)*alpha  (mod 1)
  std::uint64_t yk = p.y + static_cast<std::uint64_t>(p.k) * p.x +
                     triangular_mod(p.k) * base.alpha_fp;
  return to_unit(yk);
}

double sample_coordinate(const BaseSystem& base, const Phase& p) {
  if (base.kind == BaseKind::skew_shift) return coord_y(base, p);
  return coord_x(base, p);
}

double iid_value(const BaseSystem& base, std::int64_t index) {
  std::uint64_t h = splitmix64(base.seed ^ splitmix64(static_cast<std::uint64_t>(index)));
  double u = (static_cast<double>(h >> 11)) * 0x1.0p-53;  // [0,1)
  return base.iid_halfwidth * (2.0 * u - 1.0);
}

std::vector<Phase> orbit(const BaseSystem& base, const Phase& x0,
                         std::int64_t n_from, std::int64_t n_to) {
  if (n_from > n_to) throw std::invalid_argument("orbit: n_from > n_to");
  std::vector<Phase> out;
  out.reserve(static_cast<std::size_t>(n_to - n_from + 1));
  for (std::int64_t n = n_from; n <= n_to; ++n) out.push_back(advance(base, x0, n));
  return out;
}

Potential Potential::cosine(double lambda, double y) {
  Potential p;
  p.form = PotentialForm::cosine;
  p.lambda = lambda;
  p.imaginary_shift = y;
  return p;
}

Potential Potential::single_exponential(cplx lambda, double y) {
  Potential p;
  p.form = PotentialForm::single_exponential;
  p.lambda_c = lambda;
  p.imaginary_shift = y;
  return p;
}

Potential Potential::constant_v(cplx c) {
  Potential p;
  p.form = PotentialForm::constant;
  p.constant = c;
  return p;
}

Potential Potential::fourier(std::map<int, cplx> coeffs, double y) {
  Potential p;
  p.form = PotentialForm::fourier;
  p.coeffs = std::move(coeffs);
  p.imaginary_shift = y;
  return p;
}

Potential Potential::iid_diagonal() {
  Potential p;
  p.form = PotentialForm::iid_diagonal;
  return p;
}

bool Potential::real_valued() const {
  switch (form) {
    case PotentialForm::cosine:
      return imaginary_shift == 0.0;
    case PotentialForm::constant:
      return constant.imag() == 0.0;
    case PotentialForm::iid_diagonal:
      return true;
    case PotentialForm::single_exponential:
      return lambda_c == cplx(0.0);
    case PotentialForm::fourier: {
      if (imaginary_shift != 0.0) return false;
      for (const auto& [k, v] : coeffs) {
        auto it = coeffs.find(-k);
        cplx conj_pair = (it == coeffs.end()) ? cplx(0.0) : it->second;
        if (std::abs(v - std::conj(conj_pair)) > 1e-14 * (1.0 + std::abs(v))) return false;
      }
      return true;
    }
  }
  return false;
}

double Potential::sup_abs() const {
  const double tp = 2.0 * std::numbers::pi * imaginary_shift;
  switch (form) {
    case PotentialForm::cosine:
      return 2.0 * std::abs(lambda) * std::cosh(tp);
    case PotentialForm::single_exponential:
      return std::abs(lambda_c) * std::exp(-tp);
    case PotentialForm::constant:
      return std::abs(constant);
    case PotentialForm::iid_diagonal:
      return 0.0;  // caller combines with the base's halfwidth
    case PotentialForm::fourier: {
      double s = 0.0;
      for (const auto& [k, v] : coeffs)
        s += std::abs(v) * std::exp(std::abs(2.0 * std::numbers::pi * k * imaginary_shift));
      return s;
    }
  }
  return 0.0;
}

cplx sample_potential(const Potential& p, const BaseSystem& base, const Phase& phase) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (p.form == PotentialForm::iid_diagonal) {
    if (base.kind != BaseKind::iid)
      throw std::invalid_argument("iid_diagonal potential requires an iid base system");
    return iid_value(base, phase.k);
  }
  if (p.form == PotentialForm::constant) return p.constant;
  const double x = sample_coordinate(base, phase);
  const double y = p.imaginary_shift;
  switch (p.form) {
    case PotentialForm::cosine: {
      // 2 lambda cos(2 pi (x+iy))
      return 2.0 * p.lambda *
             cplx(std::cos(two_pi * x) * std::cosh(two_pi * y),
                  -std::sin(two_pi * x) * std::sinh(two_pi * y));
    }
    case PotentialForm::single_exponential: {
      cplx e = std::exp(-two_pi * y) * cplx(std::cos(two_pi * x), std::sin(two_pi * x));
      return p.lambda_c * e;
    }
    case PotentialForm::fourier: {
      cplx s = 0.0;
      for (const auto& [k, v] : p.coeffs) {
        double ph = two_pi * k * x;
        double mag = std::exp(-two_pi * k * y);
        s += v * mag * cplx(std::cos(ph), std::sin(ph));
      }
      return s;
    }
    default:
      break;
  }
  return 0.0;
}

void potential_sequence(const Potential& p, const BaseSystem& base, const Phase& x0,
                        std::int64_t k0, std::size_t count, cplx* out) {
  for (std::size_t j = 0; j < count; ++j)
    out[j] = sample_potential(p, base, advance(base, x0, k0 + static_cast<std::int64_t>(j)));
}

Phase averaging_phase(const BaseSystem& base, int j, int m) {
  Phase p = base.initial_phase;
  if (base.kind == BaseKind::rotation || base.kind == BaseKind::skew_shift) {
    p.x += to_fixed(static_cast<double>(j) / static_cast<double>(m));
  } else if (base.kind == BaseKind::periodic) {
    p.k += j;
  } else {
    p.k += static_cast<std::int64_t>(j) << 32;  // disjoint stream windows
  }
  return p;
}

}  // namespace hn
