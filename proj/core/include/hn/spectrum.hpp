#ifndef HN_SPECTRUM_HPP
#define HN_SPECTRUM_HPP

#include <optional>
#include <string>
#include <vector>

#include "hn/cocycle.hpp"
#include "hn/grid.hpp"

namespace hn {

enum class EnergyLabel { E_minus, E_zero, E_plus };

struct EnergyClass {
  EnergyLabel label = EnergyLabel::E_zero;
  double margin = 0.0;  // |L(E) - g|
};

struct ClassifiedGrid {
  GridSpec grid;
  std::vector<EnergyClass> cells;  // row-major, node classification
  const EnergyClass& at(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

ClassifiedGrid classify(const LyapunovField& field, double g, double tol0);

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
};

struct Sigma0Cfg {
  double scan_step = 0.01;
  double refine_resolution = 1e-3;
  double margin = 1.0;  // extra width beyond [-2-||v||, 2+||v||]
  UHCfg uh;             // tuned smaller horizons for scans
  Sigma0Cfg() {
    uh.horizon = 2048;
    uh.horizon_max = 8192;
    uh.section_steps = 4096;
  }
};

struct Sigma0Result {
  std::vector<Interval> intervals;
  int inconclusive_points = 0;
};

// Sigma(0) as the complement of the uniformly hyperbolic set on the real
// line; inconclusive verdicts are included (conservative).
Sigma0Result real_spectrum_sigma0(const BaseSystem& base, const Potential& p,
                                  const Sigma0Cfg& cfg = {});

struct Polyline {
  std::vector<cplx> points;
  bool closed = false;
};

struct Cell {
  double re_lo, re_hi, im_lo, im_hi;
  double area() const { return (re_hi - re_lo) * (im_hi - im_lo); }
};

struct SpectrumSet {
  double g = 0.0;
  std::vector<Interval> real_part;      // Sigma(0) ∩ E_plus
  std::vector<Polyline> complex_part;   // iso-contours of L at level g
  std::vector<Cell> filled_cells;       // 2-D spectrum plateau cells
  double tol0 = 0.0;
  double grid_step = 0.0;

  double filled_area() const;
  // Discretization of the set at ~grid-step spacing, for Hausdorff metrics.
  std::vector<cplx> sample_points() const;
};

struct AssembleCfg {
  double tol0 = 0.0;        // 0 -> max(3*field stderr, 1e-3)
  double grad_floor = 0.0;  // 0 -> tol0 / grid step
};

SpectrumSet assemble_spectrum(const LyapunovField& field, double g,
                              const std::vector<Interval>& sigma0,
                              const AssembleCfg& cfg = {});

// Marching-squares iso-contours of the field at the given level.
std::vector<Polyline> extract_contours(const LyapunovField& field, double level,
                                       bool upper_half_only = false);

enum class Regime { all_real, mixed, all_complex };

struct TransitionReport {
  double g_lower = 0.0;  // inf of L over the real axis
  double g_upper = 0.0;  // sup of L over Sigma(0)
  double tol0 = 1e-3;
  bool continuity_warning = false;
  Regime regime(double g) const {
    if (g <= g_lower + tol0) return Regime::all_real;
    if (g >= g_upper - tol0) return Regime::all_complex;
    return Regime::mixed;
  }
};

TransitionReport transition_report(const LyapunovField& field,
                                   const std::vector<Interval>& sigma0,
                                   double tol0 = 1e-3);

struct ContourCount {
  int count = 0;  // components of E_0 in the closed upper half-plane
  std::vector<bool> closed;          // per contour: loop vs real-anchored
  int unresolved = 0;                // neither closed nor anchored
};

ContourCount count_contours(const SpectrumSet& s);

// Closed-form Lyapunov exponents used as oracles.
double oracle_free_L(cplx E);
double oracle_single_exp_L(cplx E, cplx lambda);

std::string spectrum_to_json(const SpectrumSet& s);

}  // namespace hn

#endif
