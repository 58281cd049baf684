#pragma once

// Time stepping of the Galerkin system
//   d Phi + (A Phi + P_n B(Phi) + P_n R(Phi)) dt = sum_k P_n g_k(Phi) d beta_k
// and tracking of the blow-up functional sup ||Phi||^2 + int |A Phi|^2.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spdegal/models.hpp"
#include "spdegal/noise.hpp"

namespace spdegal {

enum class Scheme { euler_maruyama, exp_euler_maruyama, semi_implicit };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);  // throws ConfigError

struct IntegratorConfig {
  Scheme scheme = Scheme::exp_euler_maruyama;
  double dt = 1e-3;
  double horizon = 1.0;
  GalerkinLevel level{};           // n == 0 means the full basis
  std::size_t state_stride = 0;    // keep every stride-th state; 0 keeps none
  // Stopped-process cap: the run freezes once the functional exceeds it.
  double halt_above = std::numeric_limits<double>::infinity();
  // When false, a non-finite state ends the run and is recorded instead.
  bool throw_on_divergence = true;

  std::size_t steps() const;
};

// Throws ConfigError for invalid values or a violated explicit stability bound.
void validate(const IntegratorConfig& cfg, const EvolutionOperators& ops);
GalerkinLevel effective_level(const IntegratorConfig& cfg, const SpectralBasis& basis);

struct Trajectory {
  std::vector<std::string> field_names;
  std::vector<double> times;
  std::vector<double> h2, v2, a2;                 // |Phi|^2, ||Phi||^2, |A Phi|^2
  std::vector<std::vector<double>> field_energy;  // [field][step]
  std::vector<double> noise_power;                // sum_k |P_n g_k(Phi)|^2
  std::vector<double> functional;                 // running blow-up functional
  std::vector<double> state_times;
  std::vector<StateVector> states;
  StateVector final_state;
  std::optional<double> halt_time;        // cap crossing (stopped process)
  std::optional<double> divergence_time;  // last finite time before NaN/Inf

  std::size_t size() const noexcept { return times.size(); }
};

// One step of the chosen scheme on level `level`; dW holds one increment per
// noise direction.
StateVector step(Scheme scheme, const EvolutionOperators& ops, const NoiseSpec& noise,
                 const StateVector& phi, double dt, std::span<const double> dW,
                 GalerkinLevel level);

// Integrates from P_n Phi0. The path must use dt and cover the horizon.
Trajectory integrate(const EvolutionOperators& ops, const NoiseSpec& noise, const StateVector& phi0,
                     const IntegratorConfig& cfg, const WienerPath& path);

// Running max of the V2 channel plus the trapezoid integral of A2.
std::vector<double> stopping_functional(std::span<const double> times, std::span<const double> v2,
                                        std::span<const double> a2);

struct StoppingTracker {
  std::vector<double> functional;
  std::vector<double> thresholds;
  std::vector<double> tau;  // +inf when not reached
  double M = 0.0;
  double T = 0.0;
  double bound = 0.0;       // (M + ||Phi_0^n||)^2
  bool member = false;      // T belongs to the stopping set
};

// Throws ArgumentError when channels are missing or inconsistent.
StoppingTracker track_stopping(const Trajectory& traj, const std::vector<double>& thresholds,
                               double M, double T);

// First time the functional exceeds cap, or the divergence time.
std::optional<double> blowup_flag(const Trajectory& traj, double cap);

}  // namespace spdegal
