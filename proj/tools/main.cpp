#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "hn/parallel.hpp"
#include "hn/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hatano-Nelson spectrum toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  CLI::App* run = app.add_subcommand("run", "execute a task from a config file");
  run->add_option("config", config_path, "JSON config (or a manifest.json)")->required();
  run->add_option("--threads", threads, "worker threads (overrides the config)");

  std::string dir_a, dir_b;
  double tolerance = 1e-12;
  CLI::App* cmp = app.add_subcommand("compare", "diff two run directories");
  cmp->add_option("a", dir_a, "first run directory")->required();
  cmp->add_option("b", dir_b, "second run directory")->required();
  cmp->add_option("--tolerance", tolerance, "numeric tolerance for the diff");

  CLI::App* schema = app.add_subcommand("schema", "print the config schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (schema->parsed()) {
      std::fputs(hn::config_schema().c_str(), stdout);
      return 0;
    }
    if (cmp->parsed()) {
      std::string report = hn::compare_artifacts(dir_a, dir_b, tolerance);
      std::fputs(report.c_str(), stdout);
      std::fputc('\n', stdout);
      return 0;
    }
    hn::ParsedConfig cfg = hn::parse_config_file(config_path);
    if (threads > 0) cfg.threads = threads;
    if (const char* env = std::getenv("HN_SPECTRA_THREADS"))
      cfg.threads = std::max(1, std::atoi(env));
    hn::execute(cfg);
    return 0;
  } catch (const hn::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const hn::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n%s\n", e.what(), e.report_json.c_str());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
