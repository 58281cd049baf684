#pragma once

// Empirical counterparts of the existence theory: structural condition checks,
// Galerkin Cauchy convergence, moment bounds, pathwise stability, strong order
// of the integrator and blow-up statistics.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spdegal/sde.hpp"

namespace spdegal {

// ---------------------------------------------------------------------------
// Condition suite

struct PropertyResult {
  std::string name;
  bool hard = true;
  bool passed = true;
  double worst = 0.0;      // largest normalized violation seen
  double tolerance = 0.0;
  std::size_t checked = 0;
};

struct RatioResult {
  std::string name;
  double max_ratio = 0.0;  // empirical constant, finite if the shape holds
  bool finite = true;
};

struct ConditionReport {
  std::vector<PropertyResult> properties;
  std::vector<RatioResult> ratios;
  LipschitzReport lipschitz;
  std::array<double, 3> sampled_lipschitz{};

  bool all_hard_passed() const;
};

ConditionReport check_conditions(const EvolutionOperators& ops, const NoiseSpec& noise,
                                 std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Ensembles

struct EnsembleSpec {
  std::shared_ptr<const EvolutionOperators> ops;
  NoiseSpec noise;
  StateVector phi0;
  IntegratorConfig cfg;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Path of one replicate: Philox stream = replicate id.
WienerPath replicate_path(const EnsembleSpec& ens, std::size_t replicate);

// Runs every replicate (without throwing on divergence) and maps its
// trajectory through `fn`; results are ordered by replicate id.
template <class R>
std::vector<R> run_ensemble(const EnsembleSpec& ens,
                            const std::function<R(std::size_t, const Trajectory&)>& fn);

// Calls body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// Galerkin Cauchy study

struct DifferenceReport {
  GalerkinLevel coarse{}, fine{};
  double error_sup = 0.0;  // sup_t ||Phi^m - Phi^n||^2
  double error_int = 0.0;  // int |A (Phi^m - Phi^n)|^2
  std::vector<double> times;
  std::vector<double> v2_series;
  std::vector<double> a2_series;
  bool truncated = false;
  double horizon = 0.0;    // end of the compared window

  double error() const { return error_sup + error_int; }
};

// Integrates every level on the same path in lockstep and compares
// consecutive pairs. A member crossing cfg.halt_above or diverging truncates
// the whole study at that time.
std::vector<DifferenceReport> galerkin_cauchy_study(const EvolutionOperators& ops,
                                                    const NoiseSpec& noise,
                                                    const StateVector& phi0,
                                                    const std::vector<GalerkinLevel>& levels,
                                                    const IntegratorConfig& cfg,
                                                    const WienerPath& path);

// ---------------------------------------------------------------------------
// Moments

struct MomentReport {
  int p = 4;
  std::size_t replicates = 0;
  double phi0_norm = 0.0;    // |P_n Phi_0|
  double estimate = 0.0;     // E sup |Phi|^p + E int ||Phi||^2 |Phi|^(p-2)
  double stderr_ = 0.0;
  double sup_term = 0.0;
  double int_term = 0.0;
  double c_hat = 0.0;        // estimate / (1 + |Phi_0|^p)
  double half_estimate = 0.0;  // first half of the replicates
  double doubling_drift = 0.0; // |estimate - half_estimate| / half_estimate
  std::size_t stopped = 0;
  std::vector<double> samples;
};

// Throws ArgumentError unless p is 4, 6 or 8 and DegenerateEnsembleError when
// every replicate stops at t = 0.
MomentReport moment_estimate(const EnsembleSpec& ens, int p);

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  double delta = 0.0;
  double sup_psi2 = 0.0;   // sup_t |Psi|^2
  double budget = 0.0;     // int (1 + ||Phi1||^4 + ||Phi2||^4) dt
  std::vector<double> times;
  std::vector<double> psi2;
  bool truncated = false;
  double horizon = 0.0;

  double sup_psi() const { return std::sqrt(sup_psi2); }
};

// Unit-norm direction used when none is given.
StateVector default_direction(const EvolutionOperators& ops);

StabilityReport stability_study(const EvolutionOperators& ops, const NoiseSpec& noise,
                                const StateVector& phi0, double delta,
                                const StateVector& direction, const IntegratorConfig& cfg,
                                const WienerPath& path);

// ---------------------------------------------------------------------------
// Strong order

struct OrderReport {
  std::vector<double> dts;
  std::vector<double> errors;  // E |Phi_dt(T) - Phi_ref(T)|
  double reference_dt = 0.0;
  double order = 0.0;          // least-squares log-log slope
  bool monotone = true;
  std::size_t paths = 0;
  std::string warning;
};

// Ladder dt0 / 2^j, j = 0..m, against the same paths refined m + 3 times.
OrderReport strong_order_study(const EvolutionOperators& ops, const NoiseSpec& noise,
                               const StateVector& phi0, const IntegratorConfig& cfg, int m,
                               std::size_t paths, std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Globality

struct GlobalityReport {
  int dim = 2;
  std::size_t replicates = 0;
  std::size_t blowups = 0;
  std::size_t divergences = 0;
  double cap = 0.0;
  double blowup_fraction = 0.0;
  std::vector<double> quantile_levels;
  std::vector<double> functional_quantiles;  // of the terminal functional
  std::vector<double> terminal;
};

GlobalityReport globality_experiment(const EnsembleSpec& ens, double cap);

// ---------------------------------------------------------------------------
// Small-time exit probability P[A_n(tau, S)]

struct ExitProbability {
  double S = 0.0;
  double probability = 0.0;
  double stderr_ = 0.0;
};

// tau is the first exit from the stopping set with parameter M (capped at the
// horizon); A_n(tau, S) is the event that the functional at tau ^ S exceeds
// ||Phi_0^n||^2 + (M - 1)^2.
std::vector<ExitProbability> exit_probability(const EnsembleSpec& ens, double M,
                                              const std::vector<double>& S);

// Sample quantile with linear interpolation; q in [0, 1].
double quantile(std::vector<double> values, double q);

// ---------------------------------------------------------------------------

template <class R>
std::vector<R> run_ensemble(const EnsembleSpec& ens,
                            const std::function<R(std::size_t, const Trajectory&)>& fn) {
  std::vector<R> out(ens.replicates);
  IntegratorConfig cfg = ens.cfg;
  cfg.throw_on_divergence = false;
  parallel_for(ens.replicates, ens.threads, [&](std::size_t r) {
    const Trajectory tr = integrate(*ens.ops, ens.noise, ens.phi0, cfg, replicate_path(ens, r));
    out[r] = fn(r, tr);
  });
  return out;
}

}  // namespace spdegal
