#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "spdegal/config.hpp"
#include "spdegal/errors.hpp"
#include "spdegal/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Galerkin solver and experiment driver for stochastic fluid models on the torus"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = 1;
  bool lenient = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed, "base seed, overrides the configuration");
  app.add_option("--out", out, "output directory, overrides the configuration");
  app.add_option("--threads", threads, "worker threads for ensembles")->check(CLI::PositiveNumber);
  auto* strict = app.add_flag("--strict", "reject unknown keys (default)");
  app.add_flag("--lenient", lenient, "ignore unknown keys")->excludes(strict);
  CLI11_PARSE(app, argc, argv);

  spdegal::RunConfig cfg;
  try {
    cfg = spdegal::load_config(config_path, !lenient);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return spdegal::exit_code_for(e);
  }
  if (seed) cfg.seed = *seed;
  if (out) cfg.out_dir = *out;
  return spdegal::run_guarded(cfg, threads, std::cout, std::cerr);
}
