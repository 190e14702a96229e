#include "hn/dos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t u) { return (u >> 11) * 0x1.0p-53; }

}  // namespace

EmpiricalMeasure empirical_dos(const BaseSystem& base, const Potential& p, const Phase& x0,
                               std::int64_t n, double g, Boundary boundary) {
  FiniteOperator op = build_operator(base, p, x0, n, g, boundary);
  EigenResult er = eigenvalues(op);
  if (!er.failed_indices.empty())
    throw std::runtime_error("empirical_dos: eigensolver failed to converge");
  EmpiricalMeasure mu;
  mu.atoms.reserve(er.eigenvalues.size());
  double w = 1.0 / static_cast<double>(n);
  for (cplx ev : er.eigenvalues) mu.atoms.push_back({ev, w});
  mu.total = 1.0;
  return mu;
}

double log_potential(const EmpiricalMeasure& mu, cplx z) {
  double s = 0.0;
  for (const Atom& a : mu.atoms) {
    double d = std::abs(a.location - z);
    if (d < 1e-300) return -kInf;
    s += a.weight * std::log(d);
  }
  return s;
}

double ThoulessReport::max_identity_gap() const {
  double m = 0.0;
  for (const ThoulessProbe& pr : probes)
    if (!pr.too_close) m = std::max(m, std::abs(pr.charpoly_rate - pr.log_pot));
  return m;
}

double ThoulessReport::max_limit_gap() const {
  double m = 0.0;
  for (const ThoulessProbe& pr : probes)
    if (!pr.too_close) m = std::max(m, std::abs(pr.charpoly_rate - pr.l_plus));
  return m;
}

ThoulessReport thouless_check(const BaseSystem& base, const Potential& p, const Phase& x0,
                              std::int64_t n, double g, const std::vector<cplx>& probes,
                              const LyapunovCfg& lcfg) {
  ThoulessReport rep;
  rep.n = n;
  rep.g = g;
  EmpiricalMeasure mu = empirical_dos(base, p, x0, n, g, Boundary::periodic);
  FiniteOperator op = build_operator(base, p, x0, n, g, Boundary::periodic);
  for (cplx E : probes) {
    ThoulessProbe pr;
    pr.E = E;
    double dmin = kInf;
    for (const Atom& a : mu.atoms) dmin = std::min(dmin, std::abs(a.location - E));
    pr.min_atom_dist = dmin;
    pr.too_close = dmin < 1e-3;
    CharpolyValue cv = charpoly_eval(op, E);
    pr.charpoly_rate = cv.singular ? -kInf : cv.log_abs / static_cast<double>(n);
    pr.log_pot = log_potential(mu, E);
    pr.l_plus = std::max(lyapunov(base, p, E, 0.0, lcfg).value, g);
    rep.probes.push_back(pr);
  }
  return rep;
}

double DensityGrid::mass() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s * grid.dx() * grid.dy();
}

DensityGrid dos_density_from_L(const LyapunovField& field, double g, const DensityCfg& cfg) {
  const GridSpec& gr = field.grid;
  DensityGrid out;
  out.grid = gr;
  out.density.assign(field.value.size(), 0.0);
  out.band.assign(field.value.size(), 0);
  auto lp = [&](int i, int j) { return std::max(field.at(i, j), g); };
  double hx2 = gr.dx() * gr.dx(), hy2 = gr.dy() * gr.dy();
  for (int j = 1; j + 1 < gr.ny; ++j) {
    for (int i = 1; i + 1 < gr.nx; ++i) {
      std::size_t k = static_cast<std::size_t>(j) * gr.nx + i;
      bool kink = false;
      for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}})
        if (std::abs(field.at(i + di, j + dj) - g) < cfg.band_tol) kink = true;
      if (kink) out.band[k] = 1;
      double lap = (lp(i + 1, j) - 2.0 * lp(i, j) + lp(i - 1, j)) / hx2 +
                   (lp(i, j + 1) - 2.0 * lp(i, j) + lp(i, j - 1)) / hy2;
      double d = lap / (2.0 * std::numbers::pi);
      if (d < -cfg.clip_tol) {
        d = -cfg.clip_tol;
        ++out.clipped;
      }
      out.density[k] = d;
    }
  }
  return out;
}

double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return kInf;
  double worst = 0.0;
  for (cplx z : a) {
    double best = kInf;
    for (cplx w : b) best = std::min(best, std::abs(z - w));
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

SupportReport support_vs_spectrum(const EmpiricalMeasure& mu, const SpectrumSet& s) {
  std::vector<cplx> atoms;
  atoms.reserve(mu.atoms.size());
  for (const Atom& a : mu.atoms) atoms.push_back(a.location);
  std::vector<cplx> samples = s.sample_points();
  SupportReport rep;
  rep.hausdorff_out = directed_hausdorff(atoms, samples);
  rep.hausdorff_in = directed_hausdorff(samples, atoms);
  return rep;
}

double bounded_lipschitz_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  // Fixed dictionary: 200 Gaussian bumps, centers in [-5,5]^2, widths in
  // [0.3, 1.5], amplitudes capped so both sup|f| and Lip(f) stay at most 1.
  constexpr int kBumps = 200;
  constexpr std::uint64_t kSeed = 0x6873706563646f73ull;
  double worst = 0.0;
  for (int k = 0; k < kBumps; ++k) {
    std::uint64_t s = kSeed + static_cast<std::uint64_t>(k) * 0x100000001b3ull;
    double cx = -5.0 + 10.0 * unit_double(mix64(s));
    double cy = -5.0 + 10.0 * unit_double(mix64(s + 1));
    double w = 0.3 + 1.2 * unit_double(mix64(s + 2));
    double amp = std::min(1.0, w * std::exp(0.5));
    cplx c(cx, cy);
    double ia = 0.0, ib = 0.0;
    for (const Atom& at : a.atoms) {
      double r = std::abs(at.location - c);
      ia += at.weight * amp * std::exp(-r * r / (2.0 * w * w));
    }
    for (const Atom& at : b.atoms) {
      double r = std::abs(at.location - c);
      ib += at.weight * amp * std::exp(-r * r / (2.0 * w * w));
    }
    worst = std::max(worst, std::abs(ia - ib));
  }
  return worst;
}

void write_density_bin(const DensityGrid& d, const std::string& path) {
  LyapunovField f;
  f.grid = d.grid;
  f.value = d.density;
  f.stderr_.assign(d.density.size(), 0.0);
  f.flag.assign(d.band.begin(), d.band.end());
  write_field_bin(f, path);
}

}  // namespace hn
