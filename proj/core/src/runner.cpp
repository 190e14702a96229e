#include "hn/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hn/cocycle.hpp"
#include "hn/dos.hpp"
#include "hn/green.hpp"
#include "hn/parallel.hpp"
#include "hn/spectrum.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace hn {

namespace {

constexpr const char* kVersion = "0.1.0";

double get_num(const json& j, const char* key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return j[key].get<double>();
}

std::int64_t get_int(const json& j, const char* key, std::int64_t fallback,
                     const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError(path + "." + key + ": expected an integer");
  return j[key].get<std::int64_t>();
}

std::string get_str(const json& j, const char* key, const std::string& fallback,
                    const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

cplx get_cplx(const json& j, const char* key, cplx fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ConfigError(path + "." + key + ": expected a number or [re, im]");
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string());
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<cplx> read_eigen_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::vector<cplx> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    double re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) == 2) out.emplace_back(re, im);
  }
  return out;
}

EmpiricalMeasure read_dos_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  EmpiricalMeasure mu;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    double re, im, w;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &re, &im, &w) == 3) {
      mu.atoms.push_back({cplx(re, im), w});
      mu.total += w;
    }
  }
  return mu;
}

}  // namespace

std::uint64_t config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ParsedConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (j.contains("config")) j = j["config"];  // accept a manifest as a config

  ParsedConfig c;
  const json model = j.value("model", json::object());
  const json base = model.value("base", json::object());
  const json pot = model.value("potential", json::object());
  const json num = j.value("numeric", json::object());
  const json out = j.value("output", json::object());

  std::string kind = get_str(base, "kind", "rotation", "model.base");
  double alpha = get_num(base, "alpha", 0.6180339887498949, "model.base");
  double x0 = get_num(base, "x0", 0.0, "model.base");
  double y0 = get_num(base, "y0", 0.0, "model.base");
  std::int64_t period = get_int(base, "period", 1, "model.base");
  std::int64_t k0 = get_int(base, "k0", 0, "model.base");
  std::int64_t seed = get_int(base, "seed", 1, "model.base");
  double iid_lambda = get_num(base, "lambda", 1.0, "model.base");
  if (kind == "rotation") {
    c.base = BaseSystem::rotation(alpha, x0);
  } else if (kind == "skew_shift") {
    c.base = BaseSystem::skew_shift(alpha, x0, y0);
  } else if (kind == "periodic") {
    if (period < 1) throw ConfigError("model.base.period: must be >= 1");
    c.base = BaseSystem::periodic(period, k0);
  } else if (kind == "iid") {
    c.base = BaseSystem::iid(static_cast<std::uint64_t>(seed), iid_lambda);
  } else {
    throw ConfigError("model.base.kind: unknown kind '" + kind + "'");
  }

  std::string form = get_str(pot, "form", "zero", "model.potential");
  double lam = get_num(pot, "lambda", 0.0, "model.potential");
  double lam_im = get_num(pot, "lambda_im", 0.0, "model.potential");
  double shift_y = get_num(pot, "y", 0.0, "model.potential");
  if (form == "zero") {
    c.pot = Potential::zero();
  } else if (form == "constant") {
    c.pot = Potential::constant_v(get_cplx(pot, "constant", cplx(0.0), "model.potential"));
  } else if (form == "cosine") {
    c.pot = Potential::cosine(lam, shift_y);
  } else if (form == "single_exponential") {
    c.pot = Potential::single_exponential(cplx(lam, lam_im), shift_y);
  } else if (form == "fourier") {
    std::map<int, cplx> coeffs;
    for (auto& [k, v] : pot.value("coeffs", json::object()).items()) {
      if (!v.is_array() || v.size() != 2)
        throw ConfigError("model.potential.coeffs: values must be [re, im]");
      coeffs[std::stoi(k)] = cplx(v[0].get<double>(), v[1].get<double>());
    }
    c.pot = Potential::fourier(std::move(coeffs), shift_y);
  } else if (form == "iid") {
    if (kind != "iid") throw ConfigError("model.potential.form: iid requires base kind iid");
    c.pot = Potential::iid_diagonal();
  } else {
    throw ConfigError("model.potential.form: unknown form '" + form + "'");
  }

  c.g = get_num(model, "g", 0.0, "model");
  c.task = get_str(j, "task", "", "");
  static const char* kTasks[] = {"lyapunov", "field",    "spectrum", "transition",     "eig",
                                 "dos",      "thouless", "green",    "dirichlet-check"};
  bool known = false;
  for (const char* t : kTasks) known = known || c.task == t;
  if (!known) throw ConfigError("task: unknown or missing task '" + c.task + "'");

  const json grid = num.value("grid", json::object());
  c.grid.re_min = get_num(grid, "re_min", -3.0, "numeric.grid");
  c.grid.re_max = get_num(grid, "re_max", 3.0, "numeric.grid");
  c.grid.im_min = get_num(grid, "im_min", -2.0, "numeric.grid");
  c.grid.im_max = get_num(grid, "im_max", 2.0, "numeric.grid");
  c.grid.nx = static_cast<int>(get_int(grid, "nx", 61, "numeric.grid"));
  c.grid.ny = static_cast<int>(get_int(grid, "ny", 41, "numeric.grid"));
  if (c.grid.nx < 2) throw ConfigError("numeric.grid.nx: must be >= 2");
  if (c.grid.ny < 2) throw ConfigError("numeric.grid.ny: must be >= 2");
  if (!(c.grid.re_max > c.grid.re_min)) throw ConfigError("numeric.grid: re_max <= re_min");
  if (!(c.grid.im_max > c.grid.im_min)) throw ConfigError("numeric.grid: im_max <= im_min");

  c.n = get_int(num, "n", 64, "numeric");
  c.n2 = get_int(num, "n2", 0, "numeric");
  if (c.n < 3) throw ConfigError("numeric.n: must be >= 3");
  c.n_steps = get_int(num, "n_steps", 100000, "numeric");
  if (c.n_steps < 1) throw ConfigError("numeric.n_steps: must be >= 1");
  c.n_phases = static_cast<int>(get_int(num, "n_phases", 8, "numeric"));
  if (c.n_phases < 1) throw ConfigError("numeric.n_phases: must be >= 1");
  c.tol0 = get_num(num, "tol0", 0.0, "numeric");
  c.tol = get_num(num, "tol", 1e-8, "numeric");
  c.W = static_cast<int>(get_int(num, "W", 20, "numeric"));
  if (c.W < 2) throw ConfigError("numeric.W: must be >= 2");
  c.E = get_cplx(num, "E", cplx(0.0), "numeric");
  c.g1 = get_num(num, "g1", 0.0, "numeric");
  c.g2 = get_num(num, "g2", 1.0, "numeric");
  if (num.contains("probes")) {
    if (!num["probes"].is_array()) throw ConfigError("numeric.probes: expected an array");
    for (const auto& pr : num["probes"]) {
      if (!pr.is_array() || pr.size() != 2)
        throw ConfigError("numeric.probes: entries must be [re, im]");
      c.probes.emplace_back(pr[0].get<double>(), pr[1].get<double>());
    }
  }
  std::string bnd = get_str(num, "boundary", "periodic", "numeric");
  if (bnd == "periodic")
    c.boundary = Boundary::periodic;
  else if (bnd == "dirichlet")
    c.boundary = Boundary::dirichlet;
  else
    throw ConfigError("numeric.boundary: expected 'periodic' or 'dirichlet'");
  c.regime = get_str(num, "regime", "auto", "numeric");
  if (c.regime != "auto" && c.regime != "forward" && c.regime != "hyperbolic")
    throw ConfigError("numeric.regime: expected auto, forward, or hyperbolic");
  c.threads = static_cast<int>(get_int(num, "threads", 1, "numeric"));
  c.out_dir = get_str(out, "dir", "", "output");
  if (c.out_dir.empty()) throw ConfigError("output.dir: required");

  // Canonical form: every consumed key, defaults filled, sorted by nlohmann.
  json canon;
  canon["model"]["base"] = {{"kind", kind},     {"alpha", alpha}, {"x0", x0},
                            {"y0", y0},         {"period", period}, {"k0", k0},
                            {"seed", seed},     {"lambda", iid_lambda}};
  canon["model"]["potential"] = {{"form", form},
                                 {"lambda", lam},
                                 {"lambda_im", lam_im},
                                 {"y", shift_y},
                                 {"coeffs", pot.value("coeffs", json::object())},
                                 {"constant", {get_cplx(pot, "constant", cplx(0.0), "").real(),
                                               get_cplx(pot, "constant", cplx(0.0), "").imag()}}};
  canon["model"]["g"] = c.g;
  canon["task"] = c.task;
  canon["numeric"] = {{"grid",
                       {{"re_min", c.grid.re_min},
                        {"re_max", c.grid.re_max},
                        {"im_min", c.grid.im_min},
                        {"im_max", c.grid.im_max},
                        {"nx", c.grid.nx},
                        {"ny", c.grid.ny}}},
                      {"n", c.n},
                      {"n2", c.n2},
                      {"n_steps", c.n_steps},
                      {"n_phases", c.n_phases},
                      {"tol0", c.tol0},
                      {"tol", c.tol},
                      {"W", c.W},
                      {"E", {c.E.real(), c.E.imag()}},
                      {"g1", c.g1},
                      {"g2", c.g2},
                      {"boundary", bnd},
                      {"regime", c.regime},
                      {"threads", c.threads}};
  json jprobes = json::array();
  for (cplx pr : c.probes) jprobes.push_back({pr.real(), pr.imag()});
  canon["numeric"]["probes"] = jprobes;
  canon["output"]["dir"] = c.out_dir;
  c.canonical = canon.dump(2);
  return c;
}

ParsedConfig parse_config_file(const std::string& path) {
  return parse_config_json(read_text(path));
}

namespace {

void write_dos_csv(const EmpiricalMeasure& mu, const fs::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + p.string());
  std::fprintf(f, "re,im,weight\n");
  for (const Atom& a : mu.atoms)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", a.location.real(), a.location.imag(), a.weight);
  std::fclose(f);
}

std::vector<Interval> sigma0_if_real(const ParsedConfig& cfg, int* inconclusive) {
  if (!cfg.pot.real_valued() && cfg.pot.form != PotentialForm::iid_diagonal) return {};
  Sigma0Result r = real_spectrum_sigma0(cfg.base, cfg.pot);
  if (inconclusive) *inconclusive = r.inconclusive_points;
  return r.intervals;
}

}  // namespace

void execute(const ParsedConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  set_threads(cfg.threads);
  fs::create_directories(cfg.out_dir);
  fs::path dir(cfg.out_dir);
  std::vector<std::string> outputs;
  const Phase x0 = cfg.base.initial_phase;

  LyapunovCfg lcfg;
  lcfg.n_steps = cfg.n_steps;
  lcfg.n_phases = cfg.n_phases;

  auto make_field = [&]() { return lyapunov_field(cfg.base, cfg.pot, cfg.grid, lcfg); };

  try {
    if (cfg.task == "lyapunov") {
      LyapunovEstimate est = lyapunov(cfg.base, cfg.pot, cfg.E, 0.0, lcfg);
      json rep = {{"L", est.value}, {"stderr", est.stderr_}, {"converged", est.converged}};
      write_text(dir / "report.json", rep.dump(2));
      outputs.push_back("report.json");
    } else if (cfg.task == "field") {
      LyapunovField f = make_field();
      write_field_bin(f, (dir / "field.bin").string());
      write_field_csv(f, (dir / "field.csv").string());
      json rep = {{"max_stderr", f.max_stderr()}};
      write_text(dir / "report.json", rep.dump(2));
      outputs = {"field.bin", "field.csv", "report.json"};
    } else if (cfg.task == "spectrum") {
      LyapunovField f = make_field();
      int inconclusive = 0;
      std::vector<Interval> s0 = sigma0_if_real(cfg, &inconclusive);
      AssembleCfg acfg;
      acfg.tol0 = cfg.tol0;
      SpectrumSet s = assemble_spectrum(f, cfg.g, s0, acfg);
      write_field_bin(f, (dir / "field.bin").string());
      write_text(dir / "spectrum.json", spectrum_to_json(s));
      outputs = {"field.bin", "spectrum.json"};
    } else if (cfg.task == "transition") {
      LyapunovField f = make_field();
      int inconclusive = 0;
      std::vector<Interval> s0 = sigma0_if_real(cfg, &inconclusive);
      TransitionReport rep = transition_report(f, s0, cfg.tol0 > 0 ? cfg.tol0 : 1e-3);
      const char* reg = rep.regime(cfg.g) == Regime::all_real      ? "all_real"
                        : rep.regime(cfg.g) == Regime::all_complex ? "all_complex"
                                                                   : "mixed";
      json out = {{"g", cfg.g},
                  {"g_lower", rep.g_lower},
                  {"g_upper", rep.g_upper},
                  {"regime", reg},
                  {"continuity_warning", rep.continuity_warning},
                  {"inconclusive_points", inconclusive}};
      write_text(dir / "transition.json", out.dump(2));
      outputs = {"transition.json"};
    } else if (cfg.task == "eig") {
      FiniteOperator op = build_operator(cfg.base, cfg.pot, x0, cfg.n, cfg.g, cfg.boundary);
      EigenResult er = eigenvalues(op);
      if (!er.failed_indices.empty())
        throw NumericError("eigensolver failed",
                           json{{"failed_indices", er.failed_indices}}.dump(2));
      write_eigenvalues_csv(er.eigenvalues, (dir / "eigenvalues.csv").string());
      json rep = {{"n", cfg.n},
                  {"boundary", cfg.boundary == Boundary::periodic ? "periodic" : "dirichlet"}};
      write_text(dir / "report.json", rep.dump(2));
      outputs = {"eigenvalues.csv", "report.json"};
    } else if (cfg.task == "dos") {
      EmpiricalMeasure mu = empirical_dos(cfg.base, cfg.pot, x0, cfg.n, cfg.g, cfg.boundary);
      write_dos_csv(mu, dir / "dos.csv");
      json rep = {{"n", cfg.n}, {"atoms", mu.atoms.size()}};
      outputs = {"dos.csv", "report.json"};
      if (cfg.n2 > 0) {
        EmpiricalMeasure mu2 =
            empirical_dos(cfg.base, cfg.pot, x0, cfg.n2, cfg.g, cfg.boundary);
        write_dos_csv(mu2, dir / "dos_n2.csv");
        rep["n2"] = cfg.n2;
        rep["bounded_lipschitz_distance"] = bounded_lipschitz_distance(mu, mu2);
        outputs.insert(outputs.begin() + 1, "dos_n2.csv");
      }
      write_text(dir / "report.json", rep.dump(2));
    } else if (cfg.task == "thouless") {
      if (cfg.probes.empty()) throw ConfigError("numeric.probes: required for task thouless");
      ThoulessReport rep = thouless_check(cfg.base, cfg.pot, x0, cfg.n, cfg.g, cfg.probes, lcfg);
      json jp = json::array();
      for (const ThoulessProbe& pr : rep.probes)
        jp.push_back({{"E", {pr.E.real(), pr.E.imag()}},
                      {"charpoly_rate", pr.charpoly_rate},
                      {"log_potential", pr.log_pot},
                      {"l_plus", pr.l_plus},
                      {"too_close", pr.too_close}});
      json out = {{"n", rep.n},
                  {"g", rep.g},
                  {"probes", jp},
                  {"max_identity_gap", rep.max_identity_gap()},
                  {"max_limit_gap", rep.max_limit_gap()}};
      if (rep.max_identity_gap() > 1e-6)
        throw NumericError("thouless identity violated", out.dump(2));
      write_text(dir / "thouless.json", out.dump(2));
      outputs = {"thouless.json"};
    } else if (cfg.task == "green") {
      GreenCfg gcfg;
      std::string regime = cfg.regime;
      if (regime == "auto") {
        LyapunovEstimate est = lyapunov(cfg.base, cfg.pot, cfg.E, 0.0, gcfg.lyap);
        regime = est.value < cfg.g ? "forward" : "hyperbolic";
      }
      GreenWindow gw = regime == "forward"
                           ? green_forward(cfg.base, cfg.pot, x0, cfg.E, cfg.g, cfg.W, gcfg)
                           : green_hyperbolic(cfg.base, cfg.pot, x0, cfg.E, cfg.g, cfg.W, gcfg);
      DecayFit fit = decay_fit(gw);
      double resid = inverse_residual(gw, cfg.base, cfg.pot, x0);
      json out = {{"regime", regime},
                  {"L", gw.L},
                  {"g", gw.g},
                  {"rate_right", fit.rate_right},
                  {"rate_left", fit.rate_left},
                  {"prefactor", fit.prefactor},
                  {"insufficient_right", fit.insufficient_right},
                  {"insufficient_left", fit.insufficient_left},
                  {"inverse_residual", resid}};
      if (resid > 1e-8) throw NumericError("inverse identity residual too large", out.dump(2));
      write_green_csv(gw, (dir / "green.csv").string());
      write_text(dir / "green.json", out.dump(2));
      outputs = {"green.csv", "green.json"};
    } else if (cfg.task == "dirichlet-check") {
      MatchReport rep =
          dirichlet_g_invariance(cfg.base, cfg.pot, x0, cfg.n, cfg.g1, cfg.g2);
      json out = {{"n", cfg.n},
                  {"g1", cfg.g1},
                  {"g2", cfg.g2},
                  {"max_distance", rep.max_distance},
                  {"conditioning_estimate", rep.conditioning_estimate},
                  {"used_optimal_assignment", rep.used_optimal_assignment}};
      if (rep.max_distance > std::max(cfg.tol, rep.conditioning_estimate))
        throw NumericError("dirichlet spectra failed to match", out.dump(2));
      write_text(dir / "report.json", out.dump(2));
      outputs = {"report.json"};
    }
  } catch (const std::invalid_argument& e) {
    throw NumericError(e.what(), json{{"error", e.what()}}.dump(2));
  }

  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest;
  manifest["config"] = json::parse(cfg.canonical);
  char hb[32];
  std::snprintf(hb, sizeof hb, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg.canonical)));
  manifest["config_hash"] = hb;
  manifest["task"] = cfg.task;
  manifest["version"] = kVersion;
  manifest["outputs"] = outputs;
  manifest["wall_time_s"] = wall;
  write_text(dir / "manifest.json", manifest.dump(2));
}

std::string compare_artifacts(const std::string& dir_a, const std::string& dir_b,
                              double tolerance) {
  json ma = json::parse(read_text(fs::path(dir_a) / "manifest.json"));
  json mb = json::parse(read_text(fs::path(dir_b) / "manifest.json"));
  if (ma.value("task", "") != mb.value("task", ""))
    throw ConfigError("compare: task kinds differ (" + ma.value("task", std::string()) +
                      " vs " + mb.value("task", std::string()) + ")");
  json report;
  report["task"] = ma.value("task", "");
  report["tolerance"] = tolerance;
  json diffs = json::array();

  for (const auto& name_j : ma.value("outputs", json::array())) {
    std::string name = name_j.get<std::string>();
    fs::path pa = fs::path(dir_a) / name, pb = fs::path(dir_b) / name;
    if (!fs::exists(pb)) {
      diffs.push_back({{"file", name}, {"metric", "missing_in_b"}});
      continue;
    }
    if (name.size() > 4 && name.substr(name.size() - 4) == ".bin") {
      LyapunovField fa = read_field_bin(pa.string());
      LyapunovField fb = read_field_bin(pb.string());
      double dev = 0.0;
      if (fa.grid.nx == fb.grid.nx && fa.grid.ny == fb.grid.ny) {
        for (std::size_t k = 0; k < fa.value.size(); ++k)
          dev = std::max(dev, std::abs(fa.value[k] - fb.value[k]));
      } else {
        for (int jy = 0; jy < fa.grid.ny; ++jy)
          for (int ix = 0; ix < fa.grid.nx; ++ix)
            dev = std::max(dev,
                           std::abs(fa.at(ix, jy) - fb.interp(fa.grid.node(ix, jy))));
      }
      if (dev > tolerance)
        diffs.push_back({{"file", name}, {"metric", "max_deviation"}, {"value", dev}});
    } else if (name == "eigenvalues.csv") {
      MatchReport mr = match_spectra(read_eigen_csv(pa), read_eigen_csv(pb), tolerance);
      if (mr.max_distance > tolerance)
        diffs.push_back(
            {{"file", name}, {"metric", "matched_distance"}, {"value", mr.max_distance}});
    } else if (name == "dos.csv" || name == "dos_n2.csv") {
      double bl = bounded_lipschitz_distance(read_dos_csv(pa), read_dos_csv(pb));
      if (bl > tolerance)
        diffs.push_back(
            {{"file", name}, {"metric", "bounded_lipschitz_distance"}, {"value", bl}});
    } else {
      if (read_text(pa) != read_text(pb))
        diffs.push_back({{"file", name}, {"metric", "bytes_differ"}});
    }
  }
  // Cross-size DOS runs: report the weak-distance line even when filenames differ.
  if (report["task"] == "dos" && diffs.empty()) {
    fs::path pa = fs::path(dir_a) / "dos.csv", pb = fs::path(dir_b) / "dos.csv";
    if (fs::exists(pa) && fs::exists(pb)) {
      double bl = bounded_lipschitz_distance(read_dos_csv(pa), read_dos_csv(pb));
      report["bounded_lipschitz_distance"] = bl;
    }
  }
  report["differences"] = diffs;
  report["identical"] = diffs.empty();
  return report.dump(2);
}

std::string config_schema() {
  return R"(Config schema (JSON object; all keys optional unless noted):

model.base.kind      rotation | skew_shift | periodic | iid   (default rotation)
model.base.alpha     frequency for rotation/skew_shift        (default (sqrt(5)-1)/2)
model.base.x0, y0    initial torus coordinates                (default 0)
model.base.period    cycle length for kind=periodic           (>= 1)
model.base.k0        starting index for kind=periodic
model.base.seed      stream seed for kind=iid
model.base.lambda    iid half-width: values uniform on [-lambda, lambda]

model.potential.form zero | constant | cosine | single_exponential | fourier | iid
model.potential.lambda      coupling (cosine: v = 2*lambda*cos(2 pi x);
                            single_exponential: v = (lambda + i*lambda_im)*e^{2 pi i x})
model.potential.lambda_im   imaginary part for single_exponential
model.potential.constant    [re, im] for form=constant
model.potential.coeffs      {"k": [re, im], ...} for form=fourier
model.potential.y           imaginary shift of the evaluation point
model.g              non-Hermiticity parameter                (default 0)

task (required)      lyapunov | field | spectrum | transition | eig | dos |
                     thouless | green | dirichlet-check

numeric.grid         {re_min, re_max, im_min, im_max, nx, ny} (default [-3,3]x[-2,2], 61x41)
numeric.n            matrix size                              (default 64, >= 3)
numeric.n2           optional second size for dos convergence
numeric.n_steps      cocycle iteration length                 (default 100000)
numeric.n_phases     orbits averaged per estimate             (default 8)
numeric.tol0         classification band half-width           (default: derived from stderr)
numeric.tol          pass/fail tolerance (dirichlet-check)    (default 1e-8)
numeric.probes       [[re, im], ...] energies for thouless
numeric.W            green window half-width                  (default 20, >= 2)
numeric.E            probe energy [re, im] or scalar
numeric.g1, g2       the two couplings for dirichlet-check
numeric.boundary     periodic | dirichlet                     (default periodic)
numeric.regime       auto | forward | hyperbolic (green)      (default auto)
numeric.threads      worker threads (HN_SPECTRA_THREADS overrides)

output.dir (required)  artifact directory; writes task outputs plus manifest.json

Exit codes: 0 ok, 2 config error, 3 numeric failure.
)";
}

}  // namespace hn
