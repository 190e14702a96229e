// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Tolerances are pinned here on purpose; do not loosen them to
// make a run pass.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hn/cocycle.hpp"
#include "hn/dos.hpp"
#include "hn/dynamics.hpp"
#include "hn/finite.hpp"
#include "hn/green.hpp"
#include "hn/runner.hpp"
#include "hn/spectrum.hpp"

using namespace hn;

namespace {

const double kGolden = 0.6180339887498949;
const double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s: %s  (%s)\n", id, pass ? "pass" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

BaseSystem base0() { return BaseSystem::rotation(kGolden, 0.0); }
Potential zero_pot() { return Potential::fourier({}); }

double now_s() {
  using clk = std::chrono::steady_clock;
  static clk::time_point t0 = clk::now();
  return std::chrono::duration<double>(clk::now() - t0).count();
}

// ---------------------------------------------------------------- C1
void criterion1() {
  BaseSystem b = base0();
  LyapunovCfg point_cfg;
  point_cfg.n_steps = 100000;
  LyapunovEstimate est = lyapunov(b, zero_pot(), cplx(3.0), 0.0, point_cfg);
  double point_err = std::abs(est.value - 0.962424);

  GridSpec grid{-3.0, 3.0, -2.0, 2.0, 61, 41};
  LyapunovCfg grid_cfg;
  grid_cfg.n_steps = 10000;
  grid_cfg.n_phases = 4;
  double t0 = now_s();
  LyapunovField f = lyapunov_field(b, zero_pot(), grid, grid_cfg);
  double dt = now_s() - t0;
  double worst = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      worst = std::max(worst, std::abs(f.at(i, j) - oracle_free_L(grid.node(i, j))));

  bool pass = point_err < 1e-3 && worst < 2e-3 && dt < 60.0;
  report("C1 free Lyapunov oracle", pass,
         "point err " + fmt(point_err) + " < 1e-3, grid err " + fmt(worst) +
             " < 2e-3, grid time " + fmt(dt) + "s < 60s");
}

// ---------------------------------------------------------------- C2
void criterion2() {
  BaseSystem b = base0();
  Potential p = Potential::single_exponential(2.0);
  GridSpec grid{-3.0, 3.0, -2.0, 2.0, 201, 135};
  LyapunovCfg cfg;
  cfg.n_steps = 3000;
  cfg.n_phases = 2;
  cfg.check_convergence = false;
  LyapunovField f = lyapunov_field(b, p, grid, cfg);
  double worst = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      worst = std::max(worst, std::abs(f.at(i, j) - oracle_single_exp_L(grid.node(i, j), 2.0)));

  double glam = std::log(2.0);
  AssembleCfg acfg;
  acfg.tol0 = 0.01;
  double want = kPi * 2.5 * 1.5;
  double area_on = assemble_spectrum(f, glam, {}, acfg).filled_area();
  double area_hi = assemble_spectrum(f, glam + 0.2, {}, acfg).filled_area();
  double area_lo = assemble_spectrum(f, glam - 0.2, {}, acfg).filled_area();

  bool pass = worst < 5e-3 && std::abs(area_on - want) / want < 0.05 &&
              area_hi < 0.01 * want && area_lo < 0.01 * want;
  report("C2 critical plateau", pass,
         "field err " + fmt(worst) + " < 5e-3, area " + fmt(area_on) + " vs " + fmt(want) +
             " (5%), off-critical areas " + fmt(area_hi) + ", " + fmt(area_lo) + " < " +
             fmt(0.01 * want));
}

// ---------------------------------------------------------------- C3
struct BridgeResult {
  double out = 0.0, in = 0.0, threshold = 0.0;
  int excluded = 0;
  bool pass = false;
};

// Truncating the line to a ring inserts one defective bond; modes localized
// there are finite-size boundary artifacts (verified against the infinite
// model), so the support comparison uses the bulk modes and reports how many
// were set aside.
BridgeResult bridge_case(const Potential& p, double g, const GridSpec& grid,
                         const std::vector<Interval>& sigma0, bool with_seam_filter) {
  BaseSystem b = base0();
  LyapunovCfg cfg;
  cfg.n_steps = 3000;
  cfg.n_phases = 2;
  cfg.check_convergence = false;
  LyapunovField f = lyapunov_field(b, p, grid, cfg);
  AssembleCfg acfg;
  acfg.tol0 = 0.01;
  SpectrumSet s = assemble_spectrum(f, g, sigma0, acfg);
  std::vector<cplx> samples = s.sample_points();

  FiniteOperator op = build_operator(b, p, b.initial_phase, 2048, g, Boundary::periodic);
  EigenResult er = eigenvalues(op, with_seam_filter);
  BridgeResult r;
  std::vector<cplx> bulk;
  if (with_seam_filter) {
    std::vector<double> sw = seam_weights(er, op.n, 64);
    for (std::size_t j = 0; j < er.eigenvalues.size(); ++j) {
      if (sw[j] > 0.9)
        ++r.excluded;
      else
        bulk.push_back(er.eigenvalues[j]);
    }
  } else {
    bulk = er.eigenvalues;
  }
  r.out = directed_hausdorff(bulk, samples);
  r.in = directed_hausdorff(samples, bulk);
  r.threshold = 3.0 * s.grid_step;
  r.pass = r.out < r.threshold && r.in < r.threshold;
  return r;
}

void criterion3() {
  BaseSystem b = base0();
  Sigma0Result s0_free = real_spectrum_sigma0(b, zero_pot());
  Sigma0Result s0_cos2 = real_spectrum_sigma0(b, Potential::cosine(2.0));
  Sigma0Result s0_cos05 = real_spectrum_sigma0(b, Potential::cosine(0.5));

  struct Case {
    const char* name;
    Potential p;
    double g;
    GridSpec grid;
    std::vector<Interval> sigma0;
    bool filter;
  };
  std::vector<Case> cases;
  cases.push_back({"free g=1", zero_pot(), 1.0,
                   {-3.5, 3.5, -2.6, 2.6, 201, 201}, s0_free.intervals, false});
  cases.push_back({"cosine lam=2 g=0.3", Potential::cosine(2.0), 0.3,
                   {-7.0, 7.0, -3.0, 3.0, 201, 201}, s0_cos2.intervals, true});
  cases.push_back({"cosine lam=2 g=1.2", Potential::cosine(2.0), 1.2,
                   {-7.0, 7.0, -3.0, 3.0, 201, 201}, s0_cos2.intervals, true});
  cases.push_back({"cosine lam=0.5 g=1", Potential::cosine(0.5), 1.0,
                   {-4.5, 4.5, -3.0, 3.0, 201, 201}, s0_cos05.intervals, true});
  cases.push_back({"single-exp lam=2 g=log2", Potential::single_exponential(2.0),
                   std::log(2.0), {-3.0, 3.0, -2.0, 2.0, 201, 135}, {}, true});

  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    BridgeResult r = bridge_case(c.p, c.g, c.grid, c.sigma0, c.filter);
    pass = pass && r.pass;
    if (!detail.empty()) detail += "; ";
    detail += std::string(c.name) + " out " + fmt(r.out) + " in " + fmt(r.in) + " < " +
              fmt(r.threshold) + (c.filter ? " [" + std::to_string(r.excluded) +
                                                 "/2048 boundary modes set aside]"
                                           : "");
  }
  report("C3 spectrum vs eigenvalue clouds", pass, detail);
}

// ---------------------------------------------------------------- C4
void criterion4() {
  BaseSystem b = base0();
  FiniteOperator pbc = build_operator(b, zero_pot(), b.initial_phase, 64, 1.0,
                                      Boundary::periodic);
  std::vector<cplx> circ;
  for (int k = 0; k < 64; ++k) {
    double th = 2.0 * kPi * k / 64;
    circ.push_back(cplx(-2.0 * std::cosh(1.0) * std::cos(th),
                        -2.0 * std::sinh(1.0) * std::sin(th)));
  }
  double d_circ = match_spectra(eigenvalues(pbc).eigenvalues, circ, 1e-9).max_distance;

  FiniteOperator dir = build_operator(b, zero_pot(), b.initial_phase, 10, 0.0,
                                      Boundary::dirichlet);
  std::vector<cplx> cosv;
  for (int k = 1; k <= 10; ++k) cosv.push_back(-2.0 * std::cos(k * kPi / 11.0));
  double d_dir = match_spectra(eigenvalues(dir).eigenvalues, cosv, 1e-9).max_distance;

  double d_inv = dirichlet_g_invariance(b, Potential::cosine(2.0), b.initial_phase, 32,
                                        0.0, 1.0).max_distance;

  bool pass = d_circ < 1e-9 && d_dir < 1e-9 && d_inv < 1e-8;
  report("C4 exact finite oracles", pass,
         "circulant " + fmt(d_circ) + " < 1e-9, dirichlet " + fmt(d_dir) +
             " < 1e-9, g-invariance " + fmt(d_inv) + " < 1e-8");
}

// ---------------------------------------------------------------- C5
void criterion5() {
  BaseSystem b = base0();
  Potential p = Potential::cosine(2.0);
  Sigma0Result s0 = real_spectrum_sigma0(b, p);
  GridSpec grid{-7.0, 7.0, -0.5, 0.5, 281, 21};
  LyapunovCfg cfg;
  cfg.n_steps = 20000;
  cfg.n_phases = 4;
  cfg.check_convergence = false;
  LyapunovField f = lyapunov_field(b, p, grid, cfg);
  TransitionReport rep = transition_report(f, s0.intervals, 1e-3);

  double lg2 = std::log(2.0);
  bool thresholds_ok = std::abs(rep.g_lower - lg2) < 5e-2 && std::abs(rep.g_upper - lg2) < 5e-2;
  bool low_ok = rep.regime(0.3) == Regime::all_real;
  bool high_ok = rep.regime(1.2) == Regime::all_complex;

  // the assembled sets at the two regimes
  GridSpec wide{-7.0, 7.0, -3.0, 3.0, 141, 141};
  LyapunovCfg wcfg;
  wcfg.n_steps = 3000;
  wcfg.n_phases = 2;
  wcfg.check_convergence = false;
  LyapunovField wf = lyapunov_field(b, p, wide, wcfg);
  AssembleCfg acfg;
  acfg.tol0 = 0.01;
  SpectrumSet s_low = assemble_spectrum(wf, 0.3, s0.intervals, acfg);
  SpectrumSet s_high = assemble_spectrum(wf, 1.2, s0.intervals, acfg);
  bool parts_ok = s_low.complex_part.empty() && s_high.real_part.empty() &&
                  !s_low.real_part.empty() && !s_high.complex_part.empty();

  Regime mid = rep.regime(0.69);
  const char* mid_name = mid == Regime::all_real ? "all_real"
                         : mid == Regime::mixed ? "mixed"
                                                : "all_complex";

  bool pass = thresholds_ok && low_ok && high_ok && parts_ok;
  report("C5 real-complex transition", pass,
         "g_lower " + fmt(rep.g_lower) + ", g_upper " + fmt(rep.g_upper) + " vs log2 " +
             fmt(lg2) + " (5e-2); regime(0.3) all_real, regime(1.2) all_complex; "
             "regime(0.69)=" + mid_name + " margins " + fmt(0.69 - rep.g_lower) + "/" +
             fmt(rep.g_upper - 0.69));
}

// ---------------------------------------------------------------- C6
void criterion6() {
  BaseSystem b = base0();
  std::vector<cplx> probes;
  for (int k = 0; k < 10; ++k) {
    double th = 2.0 * kPi * (k + 0.5) / 10;
    probes.push_back(6.0 * cplx(std::cos(th), std::sin(th)));
  }
  LyapunovCfg lcfg;
  lcfg.n_steps = 100000;
  lcfg.n_phases = 4;

  bool pass = true;
  std::string detail;
  struct M {
    const char* name;
    Potential p;
  };
  for (const M& m : {M{"free", zero_pot()}, M{"cosine lam=2", Potential::cosine(2.0)}}) {
    ThoulessReport rep = thouless_check(b, m.p, b.initial_phase, 4096, 0.5, probes, lcfg);
    double idg = rep.max_identity_gap();
    double limg = rep.max_limit_gap();
    pass = pass && idg < 1e-6 && limg < 1e-2;
    if (!detail.empty()) detail += "; ";
    detail += std::string(m.name) + " identity " + fmt(idg) + " < 1e-6, limit " +
              fmt(limg) + " < 1e-2";
  }
  report("C6 Thouless identities", pass, detail);
}

// ---------------------------------------------------------------- C7
void criterion7() {
  BaseSystem b = base0();
  double L3 = std::log((3.0 + std::sqrt(5.0)) / 2.0);

  GreenWindow fw = green_forward(b, zero_pot(), b.initial_phase, cplx(0.0), 1.0, 20);
  DecayFit ffit = decay_fit(fw);
  double fres = inverse_residual(fw, b, zero_pot(), b.initial_phase);
  // L(0)=0: entries decay at rate g below the diagonal
  bool f_ok = !ffit.insufficient_right && ffit.rate_right >= 1.0 - 0.05 && fres < 1e-8;

  GreenWindow hw = green_hyperbolic(b, zero_pot(), b.initial_phase, cplx(3.0), 0.5, 20);
  DecayFit hfit = decay_fit(hw);
  double hres = inverse_residual(hw, b, zero_pot(), b.initial_phase);
  bool h_ok = !hfit.insufficient_right && !hfit.insufficient_left &&
              hfit.rate_left >= L3 - 0.5 - 0.05 && hfit.rate_right >= L3 + 0.5 - 0.05 &&
              hres < 1e-8;

  report("C7 Green function decay", f_ok && h_ok,
         "forward rate " + fmt(ffit.rate_right) + " >= 0.95, residual " + fmt(fres) +
             "; hyperbolic rates " + fmt(hfit.rate_left) + "/" + fmt(hfit.rate_right) +
             " >= " + fmt(L3 - 0.55) + "/" + fmt(L3 + 0.45) + ", residual " + fmt(hres));
}

// ---------------------------------------------------------------- C8
void criterion8() {
  BaseSystem b = base0();
  int violations = 0;
  std::string first;

  auto violate = [&](const std::string& what) {
    ++violations;
    if (first.empty()) first = what;
  };

  // seeded corpus: potentials x energies x couplings
  std::vector<Potential> pots{zero_pot(), Potential::cosine(1.0), Potential::cosine(2.0)};
  std::vector<cplx> energies{cplx(0.3, 0.1), cplx(-1.2, 0.7), cplx(2.5, -0.4)};
  std::vector<double> gs{0.0, 0.5, 1.1};

  for (const Potential& p : pots)
    for (cplx E : energies)
      for (double g : gs) {
        // determinant conservation over 8-step blocks, n=400
        double log_det = 0.0;
        for (int k = 0; k < 400; k += 8) {
          Phase ph = advance(b, b.initial_phase, k);
          ProductAccumulator acc = transfer_product(b, p, E, g, ph, 8);
          log_det += std::log(std::abs(acc.current.det())) + 2.0 * acc.log_scale;
        }
        if (std::abs(log_det + 2.0 * 400 * g) / 400.0 > 1e-9)
          violate("determinant conservation");

        // cocycle additivity at n=300+200, compared in normalized space:
        // reconstructed matrices can underflow (entries ~ e^{n(L-g)}), so the
        // check splits into log-scale agreement and unit-frob entry agreement
        ProductAccumulator an = transfer_product(b, p, E, g, b.initial_phase, 300);
        ProductAccumulator am =
            transfer_product(b, p, E, g, advance(b, b.initial_phase, 300), 200);
        ProductAccumulator at = transfer_product(b, p, E, g, b.initial_phase, 500);
        Mat2 prod = am.current * an.current;
        double fp = prod.frob(), ft = at.current.frob();
        double scale_gap = std::abs(am.log_scale + an.log_scale + std::log(fp) -
                                    at.log_scale - std::log(ft));
        double sp = 1.0 / fp, st = 1.0 / ft;
        const Mat2& tc = at.current;
        double num = std::max(
            std::max(std::abs(prod.a * sp - tc.a * st), std::abs(prod.b * sp - tc.b * st)),
            std::max(std::abs(prod.c * sp - tc.c * st), std::abs(prod.d * sp - tc.d * st)));
        if (num > 1e-9 || scale_gap / 500.0 > 1e-9) violate("cocycle additivity");

        // conjugation identity at 20 orbit points
        Phase ph = b.initial_phase;
        for (int k = 0; k < 20; ++k) {
          cplx v = sample_potential(p, b, ph);
          Mat2 sg = hatano_nelson_step(v, E, g);
          Mat2 s = schrodinger_step(v, E);
          double d = std::max(
              std::max(std::abs(sg.a - std::exp(-g) * s.a),
                       std::abs(sg.b * std::exp(g) - std::exp(-g) * s.b)),
              std::max(std::abs(sg.c * std::exp(-g) - std::exp(-g) * s.c),
                       std::abs(sg.d - std::exp(-g) * s.d)));
          if (d > 1e-12) violate("conjugation identity");
          ph = advance(b, ph, 1);
        }
      }

  // conjugation symmetry of fields for a real potential
  {
    GridSpec grid{-2.0, 2.0, -1.0, 1.0, 11, 9};
    LyapunovCfg cfg;
    cfg.n_steps = 20000;
    cfg.n_phases = 4;
    LyapunovField f = lyapunov_field(b, Potential::cosine(2.0), grid, cfg);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        if (std::abs(f.at(i, j) - f.at(i, grid.ny - 1 - j)) > 2e-3)
          violate("field conjugation symmetry");
  }

  // subharmonic mean-value inequality for log potentials
  {
    EmpiricalMeasure mu = empirical_dos(b, Potential::cosine(2.0), b.initial_phase, 64, 0.5);
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> ux(-4.0, 4.0), uy(-2.5, 2.5);
    const double h = 0.05;
    int tested = 0;
    while (tested < 100) {
      cplx z(ux(rng), uy(rng));
      double dmin = 1e300;
      for (const Atom& a : mu.atoms) dmin = std::min(dmin, std::abs(a.location - z));
      if (dmin < 2.0 * h) continue;
      double center = log_potential(mu, z);
      double avg = 0.0;
      for (int k = 0; k < 32; ++k) {
        double th = 2.0 * kPi * k / 32;
        avg += log_potential(mu, z + h * cplx(std::cos(th), std::sin(th)));
      }
      if (center > avg / 32.0 + 1e-9) violate("subharmonic mean value");
      ++tested;
    }
  }

  // byte-identical manifest round-trip
  {
    namespace fs = std::filesystem;
    fs::path d1 = "/tmp/hn_acc_rt1", d2 = "/tmp/hn_acc_rt2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    std::string cfg = R"({
      "task": "lyapunov",
      "model": {"base": {"kind": "rotation"},
                "potential": {"form": "cosine", "lambda": 2.0}, "g": 0.5},
      "numeric": {"E": [3.0, 0.5], "n_steps": 20000, "n_phases": 2},
      "output": {"dir": ")" + d1.string() + R"("}
    })";
    execute(parse_config_json(cfg));
    std::ifstream min(d1 / "manifest.json", std::ios::binary);
    std::ostringstream ms;
    ms << min.rdbuf();
    auto manifest = ms.str();
    std::string embedded = manifest;  // re-run from embedded config
    // swap output dir inside the embedded config
    std::size_t pos = embedded.find(d1.string());
    while (pos != std::string::npos) {
      embedded.replace(pos, d1.string().size(), d2.string());
      pos = embedded.find(d1.string(), pos);
    }
    // the parser accepts a manifest directly via its embedded "config"
    execute(parse_config_json(embedded));
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    if (slurp(d1 / "lyapunov.json") != slurp(d2 / "lyapunov.json"))
      violate("manifest round-trip");
  }

  report("C8 property suites", violations == 0,
         violations == 0 ? "zero violations" : std::to_string(violations) +
                                                   " violations, first: " + first);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("acceptance: %d of 8 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
