#include "spdegal/sde.hpp"

#include <algorithm>
#include <cmath>

#include "spdegal/errors.hpp"

namespace spdegal {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::euler_maruyama: return "euler_maruyama";
    case Scheme::exp_euler_maruyama: return "exp_euler_maruyama";
    case Scheme::semi_implicit: return "semi_implicit";
  }
  return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
  for (auto s : {Scheme::euler_maruyama, Scheme::exp_euler_maruyama, Scheme::semi_implicit}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

GalerkinLevel effective_level(const IntegratorConfig& cfg, const SpectralBasis& basis) {
  return cfg.level.n == 0 ? basis.full_level() : cfg.level;
}

void validate(const IntegratorConfig& cfg, const EvolutionOperators& ops) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("integrator.dt: must be positive");
  if (!(cfg.horizon >= cfg.dt) || !std::isfinite(cfg.horizon)) {
    throw ConfigError("integrator.horizon: must be finite and >= dt");
  }
  const double n = cfg.horizon / cfg.dt;
  if (std::abs(n - std::round(n)) > 1e-9 * n) {
    throw ConfigError("integrator.horizon: must be an integer multiple of dt");
  }
  const GalerkinLevel level = effective_level(cfg, ops.basis());
  ops.basis().check_level(level);
  if (!ops.basis().is_symmetric(level)) {
    throw ConfigError("integrator.level: level " + std::to_string(level.n) +
                      " splits a +-k pair and would break real-valuedness");
  }
  if (cfg.scheme == Scheme::euler_maruyama) {
    const double lim = 2.0 / ops.lambda_max(level);
    if (!(cfg.dt < lim)) {
      throw ConfigError("integrator.dt: euler_maruyama needs dt < 2/lambda_max = " +
                        std::to_string(lim));
    }
  }
}

namespace {

StateVector step_impl(Scheme scheme, const EvolutionOperators& ops, const NoiseSpec& noise,
                      const StateVector& phi, double dt, std::span<const double> dW,
                      GalerkinLevel level, double* noise_power) {
  StateVector drift = ops.apply_B(phi, phi);
  drift += ops.apply_R(phi);
  project_Pn_inplace(drift, level);
  StateVector rhs = phi;
  rhs.axpy(-dt, drift);
  if (noise.directions() > 0) {
    auto gs = eval_g(noise, phi);
    double power = 0.0;
    for (std::size_t k = 0; k < gs.size(); ++k) {
      project_Pn_inplace(gs[k], level);
      rhs.axpy(dW[k], gs[k]);
      if (noise_power) power += inner_product(gs[k], gs[k]);
    }
    if (noise_power) *noise_power = power;
  } else if (noise_power) {
    *noise_power = 0.0;
  }
  switch (scheme) {
    case Scheme::euler_maruyama:
      rhs.axpy(-dt, ops.apply_A(phi));
      return rhs;
    case Scheme::exp_euler_maruyama:
      return ops.exp_A(rhs, dt);
    case Scheme::semi_implicit:
      return ops.resolvent_A(rhs, dt);
  }
  return rhs;
}

double noise_power_of(const NoiseSpec& noise, const StateVector& phi, GalerkinLevel level) {
  double power = 0.0;
  if (noise.directions() == 0) return power;
  for (auto& g : eval_g(noise, phi)) {
    project_Pn_inplace(g, level);
    power += inner_product(g, g);
  }
  return power;
}

}  // namespace

StateVector step(Scheme scheme, const EvolutionOperators& ops, const NoiseSpec& noise,
                 const StateVector& phi, double dt, std::span<const double> dW,
                 GalerkinLevel level) {
  ops.require_roster(phi, "step");
  if (dW.size() != noise.directions()) {
    throw ArgumentError("step: expected " + std::to_string(noise.directions()) + " increments");
  }
  return step_impl(scheme, ops, noise, phi, dt, dW, level, nullptr);
}

Trajectory integrate(const EvolutionOperators& ops, const NoiseSpec& noise, const StateVector& phi0,
                     const IntegratorConfig& cfg, const WienerPath& path) {
  validate(cfg, ops);
  ops.require_roster(phi0, "integrate");
  const std::size_t steps = cfg.steps();
  if (path.directions != noise.directions()) {
    throw ArgumentError("integrate: path has " + std::to_string(path.directions) +
                        " directions, noise has " + std::to_string(noise.directions()));
  }
  if (path.steps < steps || std::abs(path.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw ArgumentError("integrate: path does not cover the horizon at this dt");
  }
  const GalerkinLevel level = effective_level(cfg, ops.basis());
  const ScaleSet& scales = ops.scales();

  Trajectory tr;
  const std::size_t nf = phi0.field_count();
  for (std::size_t f = 0; f < nf; ++f) tr.field_names.push_back(phi0.name(f));
  tr.field_energy.resize(nf);
  const std::size_t reserve = steps + 1;
  tr.times.reserve(reserve);
  tr.h2.reserve(reserve);
  tr.v2.reserve(reserve);
  tr.a2.reserve(reserve);
  tr.functional.reserve(reserve);
  tr.noise_power.reserve(reserve);

  StateVector phi = project_Pn(phi0, level);
  double running_max = 0.0, integral = 0.0;

  auto record = [&](std::size_t m, double power) {
    const double t = static_cast<double>(m) * cfg.dt;
    const double v2 = sobolev2(phi, 0.5, scales);
    const double a2 = sobolev2(phi, 1.0, scales);
    if (m == 0) {
      running_max = v2;
    } else {
      running_max = std::max(running_max, v2);
      integral += 0.5 * cfg.dt * (tr.a2.back() + a2);
    }
    tr.times.push_back(t);
    tr.h2.push_back(sobolev2(phi, 0.0, scales));
    tr.v2.push_back(v2);
    tr.a2.push_back(a2);
    const auto e = field_energies(phi);
    for (std::size_t f = 0; f < nf; ++f) tr.field_energy[f].push_back(e[f]);
    tr.noise_power.push_back(power);
    tr.functional.push_back(running_max + integral);
    if (cfg.state_stride > 0 && m % cfg.state_stride == 0) {
      tr.state_times.push_back(t);
      tr.states.push_back(phi);
    }
  };

  double power = noise_power_of(noise, phi, level);
  record(0, power);
  if (tr.functional.back() > cfg.halt_above) tr.halt_time = 0.0;

  std::vector<double> dW(noise.directions());
  for (std::size_t m = 0; m < steps && !tr.halt_time; ++m) {
    for (std::size_t k = 0; k < dW.size(); ++k) dW[k] = path.at(k, m);
    StateVector next = step_impl(cfg.scheme, ops, noise, phi, cfg.dt, dW, level, nullptr);
    if (!next.all_finite()) {
      const double t_last = static_cast<double>(m) * cfg.dt;
      if (cfg.throw_on_divergence) throw DivergenceError(t_last, tr.functional.back());
      tr.divergence_time = t_last;
      break;
    }
    phi = std::move(next);
    power = noise_power_of(noise, phi, level);
    record(m + 1, power);
    if (!std::isfinite(tr.functional.back())) {
      const double t_last = static_cast<double>(m) * cfg.dt;
      const double f_last = tr.functional[tr.functional.size() - 2];
      if (cfg.throw_on_divergence) throw DivergenceError(t_last, f_last);
      tr.divergence_time = t_last;
      break;
    }
    if (tr.functional.back() > cfg.halt_above) tr.halt_time = tr.times.back();
  }
  tr.final_state = std::move(phi);
  return tr;
}

std::vector<double> stopping_functional(std::span<const double> times, std::span<const double> v2,
                                        std::span<const double> a2) {
  std::vector<double> out(times.size());
  double running_max = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    running_max = i == 0 ? v2[0] : std::max(running_max, v2[i]);
    if (i > 0) integral += 0.5 * (times[i] - times[i - 1]) * (a2[i - 1] + a2[i]);
    out[i] = running_max + integral;
  }
  return out;
}

StoppingTracker track_stopping(const Trajectory& traj, const std::vector<double>& thresholds,
                               double M, double T) {
  const std::size_t n = traj.times.size();
  if (n == 0 || traj.v2.size() != n || traj.a2.size() != n) {
    throw ArgumentError("track_stopping: trajectory lacks the V2/A2 channels");
  }
  StoppingTracker st;
  st.functional = stopping_functional(traj.times, traj.v2, traj.a2);
  st.thresholds = thresholds;
  st.M = M;
  st.T = T;
  const double inf = std::numeric_limits<double>::infinity();
  for (double level : thresholds) {
    double tau = inf;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.functional[i] > level) {
        tau = traj.times[i];
        break;
      }
    }
    st.tau.push_back(tau);
  }
  const double r = M + std::sqrt(traj.v2[0]);
  st.bound = r * r;
  st.member = true;
  for (std::size_t i = 0; i < n && traj.times[i] <= T * (1 + 1e-12); ++i) {
    if (!(st.functional[i] <= st.bound)) {
      st.member = false;
      break;
    }
  }
  if (traj.divergence_time && *traj.divergence_time < T) st.member = false;
  return st;
}

std::optional<double> blowup_flag(const Trajectory& traj, double cap) {
  for (std::size_t i = 0; i < traj.functional.size(); ++i) {
    if (traj.functional[i] > cap) return traj.times[i];
  }
  return traj.divergence_time;
}

}  // namespace spdegal
