#pragma once

// Affine multiplicative noise g_k(Phi) = sigma_k (psi_k + gamma_k M Phi) and
// reproducible Brownian increments.
//
// Increment (k, step) of replicate r under seed s is drawn from Philox4x32-10
// with key = s and counter = (step, k, r, refinement level), mapped to N(0, 1)
// through the inverse normal CDF.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "spdegal/models.hpp"

namespace spdegal {

inline constexpr const char* kGeneratorName = "philox4x32-10/inverse-cdf";
inline constexpr int kGeneratorVersion = 1;

// Standard normal quantile of u in (0, 1).
double normal_quantile(double u);
// Standard normal draw addressed by a Philox counter.
double philox_normal(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                     std::uint32_t c3);

struct WienerPath {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;  // replicate id
  std::uint32_t level = 0;   // refinement depth
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t directions = 0;
  std::vector<double> increments;  // direction-major: [k * steps + step]

  double at(std::size_t k, std::size_t step) const { return increments[k * steps + step]; }
  // Increments of every direction at one step.
  std::vector<double> step_increments(std::size_t step) const;
};

// Throws ArgumentError for dt <= 0 or steps == 0.
WienerPath sample_path(std::uint64_t seed, double dt, std::size_t steps, std::size_t directions,
                       std::uint32_t stream = 0);
// Brownian-bridge midpoint insertion: dt / 2, 2 * steps.
WienerPath refine_path(const WienerPath& path);
WienerPath refine_path(const WienerPath& path, int times);
// Sums consecutive blocks of 2^times increments.
WienerPath coarsen_path(const WienerPath& path, int times);

struct NoiseSpec {
  std::vector<double> sigma;   // > 0
  std::vector<double> gain;    // gamma_k >= 0
  std::vector<StateVector> shapes;
  std::vector<bool> mask;      // fields acted on by gamma_k Phi; empty means all
  // Replaces the affine family when set; Lipschitz constants are then sampled.
  std::function<std::vector<StateVector>(const StateVector&)> custom;

  std::size_t directions() const noexcept { return sigma.size(); }
  bool additive() const;
  bool masked(std::size_t field) const { return mask.empty() || mask[field]; }
};

// psi_k: cos(k . x) on the k-th lowest mode pair of every active field, with a
// direction transverse to k for vector fields, normalized to unit total norm.
StateVector default_shape(const EvolutionOperators& ops, std::size_t k,
                          const std::vector<bool>& mask = {});
NoiseSpec default_noise(const EvolutionOperators& ops, std::size_t directions = 4,
                        double sigma = 0.1, double gain = 0.0, std::vector<bool> mask = {});

// Throws ConfigError listing every violation.
void validate(const NoiseSpec& spec, const EvolutionOperators& ops);

// sigma_k (psi_k + gamma_k M Phi) for every direction.
std::vector<StateVector> eval_g(const NoiseSpec& spec, const StateVector& phi);

// Closed-form constants in the H, V and D(A) scales.
struct LipschitzReport {
  std::array<double, 3> lipschitz{};
  std::array<double, 3> growth{};
  bool sampled = false;
};
LipschitzReport lipschitz_report(const NoiseSpec& spec, const EvolutionOperators& ops);

// sup |g(a) - g(b)|_{l2(X)} / |a - b|_X over random pairs with differences on
// the active fields, for X = H, V, D(A).
std::array<double, 3> sampled_lipschitz(const NoiseSpec& spec, const EvolutionOperators& ops,
                                        std::size_t samples, std::uint64_t seed);

// Random real state on the model roster, Leray-projected where required.
// Coefficients are scaled by (1 + mu)^(-decay) and vanish above max_mu when
// max_mu > 0.
StateVector random_state(const EvolutionOperators& ops, std::mt19937_64& rng, double decay = 0.0,
                         double max_mu = 0.0);

}  // namespace spdegal
