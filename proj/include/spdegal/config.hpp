#pragma once

// JSON run configuration. Grammar and defaults are documented in README.md.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spdegal/models.hpp"
#include "spdegal/sde.hpp"

namespace spdegal {

enum class Command { simulate, verify, converge, moments, stability, order, globality };

std::string_view to_string(Command c);

struct ModeEntry {
  std::string field;
  int component = 0;
  Mode k{};
  double re = 0.0;
  double im = 0.0;
};

struct InitialConfig {
  std::string kind = "random";  // random | zero | modes | snapshot
  std::uint64_t seed = 1;
  double decay = 1.5;
  double max_mu = 0.0;
  double norm = 1.0;            // |Phi_0| after scaling; random only
  std::vector<ModeEntry> modes;
  std::string path;
};

struct NoiseConfig {
  std::size_t directions = 4;
  std::vector<double> sigma{0.1};  // one value broadcasts
  std::vector<double> gain{0.0};
  std::vector<std::string> fields;  // empty means every field
};

struct ExperimentConfig {
  std::size_t samples = 1000;
  std::vector<int> radii{2, 4, 8, 16};
  int p = 4;
  std::vector<double> deltas{1e-2, 5e-3, 2.5e-3};
  int refinements = 4;
  std::size_t paths = 64;
  double cap = 1e6;
  std::vector<double> thresholds;
  double M = 2.0;
  std::vector<double> exit_times;
};

struct RunConfig {
  Command command = Command::simulate;
  std::uint64_t seed = 0;
  ModelSpec model;
  int cutoff = 4;
  NoiseConfig noise;
  IntegratorConfig integrator;
  int level_radius = 0;  // 0 means the full basis
  InitialConfig initial;
  std::size_t replicates = 1;
  ExperimentConfig experiment;
  std::string out_dir = "out";
};

// Throws ConfigError listing every syntax or validation problem. In strict
// mode unknown keys are errors.
RunConfig parse_config(const std::string& text, bool strict = true);
RunConfig load_config(const std::string& path, bool strict = true);  // IoError if unreadable

// Objects built from a validated configuration.
std::shared_ptr<const SpectralBasis> make_basis(const RunConfig& cfg);
NoiseSpec make_noise(const RunConfig& cfg, const EvolutionOperators& ops);
IntegratorConfig make_integrator(const RunConfig& cfg, const SpectralBasis& basis);
StateVector make_initial(const RunConfig& cfg, const EvolutionOperators& ops);

}  // namespace spdegal
