#ifndef HN_RUNNER_HPP
#define HN_RUNNER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hn/dynamics.hpp"
#include "hn/finite.hpp"
#include "hn/grid.hpp"

namespace hn {

// Config / schema violations; the CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failures carry the failing module's report; exit code 3.
struct NumericError : std::runtime_error {
  std::string report_json;
  NumericError(const std::string& msg, std::string report)
      : std::runtime_error(msg), report_json(std::move(report)) {}
};

struct ParsedConfig {
  BaseSystem base;
  Potential pot;
  double g = 0.0;
  std::string task;
  GridSpec grid;
  std::int64_t n = 64;
  std::int64_t n2 = 0;  // optional second size (dos convergence)
  std::int64_t n_steps = 100000;
  int n_phases = 8;
  double tol0 = 0.0;
  double tol = 1e-8;
  std::vector<cplx> probes;
  int W = 20;
  cplx E;
  double g1 = 0.0, g2 = 1.0;
  Boundary boundary = Boundary::periodic;
  std::string regime = "auto";  // green: forward | hyperbolic | auto
  int threads = 1;
  std::string out_dir;
  std::string canonical;  // full config with defaults filled, sorted keys
};

ParsedConfig parse_config_json(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Executes the task and writes artifacts (including manifest.json) to
// cfg.out_dir. Throws ConfigError / NumericError.
void execute(const ParsedConfig& cfg);

// Structured diff of two run directories; returns a JSON report. Throws
// ConfigError when the task kinds differ.
std::string compare_artifacts(const std::string& dir_a, const std::string& dir_b,
                              double tolerance);

std::string config_schema();
std::uint64_t config_hash(const std::string& canonical);

}  // namespace hn

#endif
