#ifndef HN_DOS_HPP
#define HN_DOS_HPP

#include <string>
#include <vector>

#include "hn/cocycle.hpp"
#include "hn/finite.hpp"
#include "hn/grid.hpp"
#include "hn/spectrum.hpp"

namespace hn {

struct Atom {
  cplx location;
  double weight;
};

struct EmpiricalMeasure {
  std::vector<Atom> atoms;
  double total = 0.0;
};

// Normalized eigenvalue counting measure of the n-site operator.
EmpiricalMeasure empirical_dos(const BaseSystem& base, const Potential& p, const Phase& x0,
                               std::int64_t n, double g,
                               Boundary boundary = Boundary::periodic);

// Logarithmic potential sum w_i log|loc_i - z|; -inf at atoms.
double log_potential(const EmpiricalMeasure& mu, cplx z);

struct ThoulessProbe {
  cplx E;
  double charpoly_rate = 0.0;   // (1/n) log|det(H_n - E)|
  double log_pot = 0.0;         // logarithmic potential of the counting measure
  double l_plus = 0.0;          // max{L(E), g} from the cocycle estimator
  double min_atom_dist = 0.0;
  bool too_close = false;       // within 1e-3 of an eigenvalue
};

struct ThoulessReport {
  std::int64_t n = 0;
  double g = 0.0;
  std::vector<ThoulessProbe> probes;
  double max_identity_gap() const;   // max |charpoly_rate - log_pot| over clean probes
  double max_limit_gap() const;      // max |charpoly_rate - l_plus| over clean probes
};

ThoulessReport thouless_check(const BaseSystem& base, const Potential& p, const Phase& x0,
                              std::int64_t n, double g, const std::vector<cplx>& probes,
                              const LyapunovCfg& lcfg = {});

struct DensityGrid {
  GridSpec grid;
  std::vector<double> density;  // row-major, (1/2pi) * 5-point Laplacian of max{L,g}
  std::vector<char> band;       // nodes where the kink of max{L,g} invalidates the stencil
  int clipped = 0;              // nodes floored at -clip_tol
  double mass() const;          // sum * dx * dy
  double at(int i, int j) const {
    return density[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

struct DensityCfg {
  double band_tol = 1e-2;  // |L - g| half-width flagged as the kink band
  double clip_tol = 1e-3;
};

DensityGrid dos_density_from_L(const LyapunovField& field, double g,
                               const DensityCfg& cfg = {});

struct SupportReport {
  double hausdorff_out = 0.0;  // atoms -> spectrum set
  double hausdorff_in = 0.0;   // spectrum samples -> atoms
};

SupportReport support_vs_spectrum(const EmpiricalMeasure& mu, const SpectrumSet& s);

// One-sided Hausdorff distance sup_{a in A} dist(a, B).
double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);
double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Distance over a fixed dictionary of 200 smooth bumps with sup norm and
// Lipschitz constant both at most 1.
double bounded_lipschitz_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

void write_density_bin(const DensityGrid& d, const std::string& path);

}  // namespace hn

#endif
