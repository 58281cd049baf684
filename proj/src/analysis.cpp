#include "spdegal/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "spdegal/errors.hpp"

namespace spdegal {

bool ConditionReport::all_hard_passed() const {
  for (const auto& p : properties) {
    if (p.hard && !p.passed) return false;
  }
  return true;
}

namespace {

struct Tracker {
  PropertyResult result;
  void observe(double violation) {
    ++result.checked;
    if (!std::isfinite(violation)) violation = std::numeric_limits<double>::infinity();
    result.worst = std::max(result.worst, violation);
    result.passed = result.worst <= result.tolerance;
  }
};

struct RatioTracker {
  RatioResult result;
  void observe(double num, double den) {
    if (den <= 0.0) {
      if (num > 0.0) result.finite = false;
      return;
    }
    const double r = num / den;
    if (!std::isfinite(r)) result.finite = false;
    result.max_ratio = std::max(result.max_ratio, r);
  }
};

double norm_h(const StateVector& v) { return std::sqrt(inner_product(v, v)); }

double max_abs_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t f = 0; f < a.field_count(); ++f) {
    const auto& x = a.field(f).data();
    const auto& y = b.field(f).data();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

}  // namespace

ConditionReport check_conditions(const EvolutionOperators& ops, const NoiseSpec& noise,
                                 std::size_t samples, std::uint64_t seed) {
  validate(noise, ops);
  std::mt19937_64 rng(seed);
  const int d = ops.spec().dim;
  const ScaleSet& sc = ops.scales();

  Tracker energy{{"B energy neutrality <B(v1,v2),v2> = 0", true, true, 0, 1e-10, 0}};
  Tracker antisym{{"B antisymmetry <B(v1,v2),v3> = -<B(v1,v3),v2>", true, true, 0, 1e-10, 0}};
  Tracker positive{{"R positivity <S(v),v> >= 0", true, true, 0, 1e-12, 0}};
  Tracker split{{"R split S + F = R", true, true, 0, 0.0, 0}};
  Tracker lip{{"G Lipschitz constants match closed form", true, true, 0, 1e-10, 0}};

  RatioTracker f_growth{{"|F(v)| / (1 + ||v||)"}};
  RatioTracker b_alt{{"|<B(v1,v2),v3>| / (||v1|| ||v2|| |v3|^1/2 ||v3||^1/2)"}};
  RatioTracker b_with_a{{d == 2 ? "|<B(v1,v2),v3>| / (|v1|^1/2 ||v1||^1/2 ||v2||^1/2 |Av2|^1/2 |v3|)"
                                : "|<B(v1,v2),v3>| / (||v1|| ||v2||^1/2 |Av2|^1/2 |v3|)"}};
  RatioTracker b_h{{"|B(v,v)|^2 / (||v||^3 |Av|)"}};
  RatioTracker b_18{{"|B(v,v)|^2_{D(A^1/8)} / (||v||^2 |Av|^2)"}};
  RatioTracker r_pair{{d == 2 ? "|<R(v1),v2>| / ((1 + |v1|^3/2 |Av1|^1/2) ||v1|| |v2|)"
                              : "|<R(v1),v2>| / ((1 + |v1|^1/2 ||v1|| |Av1|^1/2) ||v1|| |v2|)"}};
  RatioTracker r_diff{{"|<R(v1)-R(v2),v3>| / ((1 + ||v1||^2 + ||v2||^2) ||v1-v2|| |v3|)"}};
  RatioTracker r_h{{"|R(v)|^2 / ((1 + ||v||^4) ||v||^2)"}};
  RatioTracker r_18{{"|R(v)|^2_{D(A^1/8)} / ((1 + ||v||^4) ||v|| |Av|)"}};

  for (std::size_t s = 0; s < samples; ++s) {
    const StateVector p1 = random_state(ops, rng, 1.0);
    const StateVector p2 = random_state(ops, rng, 1.0);
    const StateVector p3 = random_state(ops, rng, 1.0);
    const double h1 = norm_h(p1), h2 = norm_h(p2), h3 = norm_h(p3);
    const double n1 = std::sqrt(ops.v2(p1)), n2 = std::sqrt(ops.v2(p2)), n3 = std::sqrt(ops.v2(p3));
    const double a1 = std::sqrt(ops.a2(p1)), a2 = std::sqrt(ops.a2(p2));

    const StateVector b12 = ops.apply_B(p1, p2);
    const StateVector b13 = ops.apply_B(p1, p3);
    const double e = inner_product(b12, p2);
    energy.observe(std::abs(e) / (n1 * n2 * n2));
    const double t23 = inner_product(b12, p3), t32 = inner_product(b13, p2);
    antisym.observe(std::abs(t23 + t32) / (n1 * n2 * n3));
    b_alt.observe(std::abs(t23), n1 * n2 * std::sqrt(h3 * n3));
    if (d == 2) {
      b_with_a.observe(std::abs(t23), std::sqrt(h1 * n1 * n2 * a2) * h3);
    } else {
      b_with_a.observe(std::abs(t23), n1 * std::sqrt(n2 * a2) * h3);
    }
    const StateVector bvv = ops.apply_B(p1, p1);
    b_h.observe(inner_product(bvv, bvv), n1 * n1 * n1 * a1);
    b_18.observe(sobolev2(bvv, 0.125, sc), n1 * n1 * a1 * a1);

    const SplitR r1 = ops.split_R(p1);
    const StateVector R1 = ops.apply_R(p1);
    const double sv = inner_product(r1.s_part, p1);
    const double scale = norm_h(r1.s_part) * h1;
    positive.observe(scale > 0.0 ? std::max(0.0, -sv / scale) : 0.0);
    split.observe(max_abs_diff(R1, r1.s_part + r1.f_part));
    f_growth.observe(norm_h(r1.f_part), 1.0 + n1);
    const double pair_scale = d == 2 ? 1.0 + std::pow(h1, 1.5) * std::sqrt(a1)
                                     : 1.0 + std::sqrt(h1) * n1 * std::sqrt(a1);
    r_pair.observe(std::abs(inner_product(R1, p2)), pair_scale * n1 * h2);
    const StateVector R2 = ops.apply_R(p2);
    const StateVector diff = p1 - p2;
    r_diff.observe(std::abs(inner_product(R1 - R2, p3)),
                   (1.0 + n1 * n1 + n2 * n2) * std::sqrt(ops.v2(diff)) * h3);
    const double q = 1.0 + n1 * n1 * n1 * n1;
    r_h.observe(inner_product(R1, R1), q * n1 * n1);
    r_18.observe(sobolev2(R1, 0.125, sc), q * n1 * a1);
  }

  ConditionReport rep;
  rep.lipschitz = lipschitz_report(noise, ops);
  rep.sampled_lipschitz = sampled_lipschitz(noise, ops, std::min<std::size_t>(samples, 1000), seed + 1);
  if (!noise.custom) {
    for (int s = 0; s < 3; ++s) {
      const double L = rep.lipschitz.lipschitz[s];
      lip.observe(std::abs(rep.sampled_lipschitz[s] - L) / std::max(1.0, L));
    }
    rep.properties.push_back(lip.result);
  }
  rep.properties.insert(rep.properties.begin(),
                        {energy.result, antisym.result, positive.result, split.result});
  rep.ratios = {f_growth.result, b_alt.result, b_with_a.result, b_h.result, b_18.result,
                r_pair.result,   r_diff.result, r_h.result,      r_18.result};
  return rep;
}

// ---------------------------------------------------------------------------

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

WienerPath replicate_path(const EnsembleSpec& ens, std::size_t replicate) {
  if (replicate > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("replicate id exceeds the 2^32 stream range");
  }
  return sample_path(ens.seed, ens.cfg.dt, ens.cfg.steps(), ens.noise.directions(),
                     static_cast<std::uint32_t>(replicate));
}

// ---------------------------------------------------------------------------

namespace {

// Running sup ||.||^2 and trapezoid of |A .|^2 for one compared quantity.
struct ErrorAccumulator {
  double sup = 0.0, integral = 0.0, last_a2 = 0.0;
  bool first = true;
  void add(double v2, double a2, double dt) {
    sup = std::max(sup, v2);
    if (!first) integral += 0.5 * dt * (last_a2 + a2);
    last_a2 = a2;
    first = false;
  }
};

struct FunctionalAccumulator {
  double running_max = 0.0, integral = 0.0, last_a2 = 0.0;
  bool first = true;
  double add(double v2, double a2, double dt) {
    running_max = first ? v2 : std::max(running_max, v2);
    if (!first) integral += 0.5 * dt * (last_a2 + a2);
    last_a2 = a2;
    first = false;
    return running_max + integral;
  }
};

}  // namespace

std::vector<DifferenceReport> galerkin_cauchy_study(const EvolutionOperators& ops,
                                                    const NoiseSpec& noise,
                                                    const StateVector& phi0,
                                                    const std::vector<GalerkinLevel>& levels,
                                                    const IntegratorConfig& cfg,
                                                    const WienerPath& path) {
  if (levels.size() < 2) throw ArgumentError("galerkin_cauchy_study: need at least two levels");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].n < levels[i - 1].n) throw ArgumentError("galerkin_cauchy_study: levels must ascend");
  }
  ops.require_roster(phi0, "galerkin_cauchy_study");
  std::vector<IntegratorConfig> cfgs;
  for (const auto& lv : levels) {
    IntegratorConfig c = cfg;
    c.level = lv;
    validate(c, ops);
    cfgs.push_back(c);
  }
  const std::size_t steps = cfg.steps();
  if (path.directions != noise.directions() || path.steps < steps ||
      std::abs(path.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw ArgumentError("galerkin_cauchy_study: path does not match the integrator");
  }

  const std::size_t L = levels.size();
  std::vector<StateVector> phi;
  for (const auto& lv : levels) phi.push_back(project_Pn(phi0, lv));
  std::vector<FunctionalAccumulator> functional(L);
  std::vector<ErrorAccumulator> acc(L - 1);
  std::vector<DifferenceReport> reports(L - 1);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    reports[i].coarse = levels[i];
    reports[i].fine = levels[i + 1];
  }

  auto record = [&](std::size_t m) {
    bool crossed = false;
    for (std::size_t l = 0; l < L; ++l) {
      const double f = functional[l].add(ops.v2(phi[l]), ops.a2(phi[l]), cfg.dt);
      crossed = crossed || f > cfg.halt_above || !std::isfinite(f);
    }
    const double t = static_cast<double>(m) * cfg.dt;
    for (std::size_t i = 0; i + 1 < L; ++i) {
      const StateVector diff = phi[i + 1] - phi[i];
      const double v2 = ops.v2(diff), a2 = ops.a2(diff);
      acc[i].add(v2, a2, cfg.dt);
      reports[i].times.push_back(t);
      reports[i].v2_series.push_back(v2);
      reports[i].a2_series.push_back(a2);
      reports[i].horizon = t;
    }
    return crossed;
  };

  bool truncated = record(0);
  std::vector<double> dW(noise.directions());
  for (std::size_t m = 0; m < steps && !truncated; ++m) {
    for (std::size_t k = 0; k < dW.size(); ++k) dW[k] = path.at(k, m);
    std::vector<StateVector> next;
    next.reserve(L);
    for (std::size_t l = 0; l < L; ++l) {
      next.push_back(step(cfg.scheme, ops, noise, phi[l], cfg.dt, dW, levels[l]));
      if (!next.back().all_finite()) truncated = true;
    }
    if (truncated) break;
    phi = std::move(next);
    truncated = record(m + 1);
  }
  for (std::size_t i = 0; i + 1 < L; ++i) {
    reports[i].error_sup = acc[i].sup;
    reports[i].error_int = acc[i].integral;
    reports[i].truncated = truncated;
  }
  return reports;
}

// ---------------------------------------------------------------------------

MomentReport moment_estimate(const EnsembleSpec& ens, int p) {
  if (p != 4 && p != 6 && p != 8) throw ArgumentError("moment_estimate: p must be 4, 6 or 8");
  if (ens.replicates < 1) throw ArgumentError("moment_estimate: replicates must be >= 1");
  struct Sample {
    double sup = 0.0, integral = 0.0;
    bool stopped = false, at_zero = false;
  };
  const double half_p = 0.5 * p;
  auto samples = run_ensemble<Sample>(ens, [&](std::size_t, const Trajectory& tr) {
    Sample s;
    double last = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      s.sup = std::max(s.sup, std::pow(tr.h2[i], half_p));
      const double g = tr.v2[i] * std::pow(tr.h2[i], half_p - 1.0);
      if (i > 0) s.integral += 0.5 * (tr.times[i] - tr.times[i - 1]) * (last + g);
      last = g;
    }
    s.stopped = tr.halt_time.has_value() || tr.divergence_time.has_value();
    s.at_zero = s.stopped && tr.size() == 1;
    return s;
  });

  MomentReport rep;
  rep.p = p;
  rep.replicates = ens.replicates;
  StateVector start = project_Pn(ens.phi0, effective_level(ens.cfg, ens.ops->basis()));
  rep.phi0_norm = std::sqrt(inner_product(start, start));
  std::size_t at_zero = 0;
  double sum = 0.0, sum_sup = 0.0, sum_int = 0.0;
  for (const auto& s : samples) {
    const double x = s.sup + s.integral;
    rep.samples.push_back(x);
    sum += x;
    sum_sup += s.sup;
    sum_int += s.integral;
    rep.stopped += s.stopped;
    at_zero += s.at_zero;
  }
  if (at_zero == samples.size()) {
    throw DegenerateEnsembleError("moment_estimate: every replicate stopped at t = 0");
  }
  const double R = static_cast<double>(samples.size());
  rep.estimate = sum / R;
  rep.sup_term = sum_sup / R;
  rep.int_term = sum_int / R;
  double var = 0.0;
  for (double x : rep.samples) var += (x - rep.estimate) * (x - rep.estimate);
  rep.stderr_ = samples.size() > 1 ? std::sqrt(var / (R - 1.0) / R) : 0.0;
  rep.c_hat = rep.estimate / (1.0 + std::pow(rep.phi0_norm, p));
  const std::size_t half = samples.size() / 2;
  if (half > 0) {
    double hs = 0.0;
    for (std::size_t i = 0; i < half; ++i) hs += rep.samples[i];
    rep.half_estimate = hs / static_cast<double>(half);
    rep.doubling_drift = std::abs(rep.estimate - rep.half_estimate) / rep.half_estimate;
  }
  return rep;
}

// ---------------------------------------------------------------------------

StateVector default_direction(const EvolutionOperators& ops) { return default_shape(ops, 1); }

StabilityReport stability_study(const EvolutionOperators& ops, const NoiseSpec& noise,
                                const StateVector& phi0, double delta,
                                const StateVector& direction, const IntegratorConfig& cfg,
                                const WienerPath& path) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ArgumentError("stability_study: delta must be >= 0");
  ops.require_roster(phi0, "stability_study");
  ops.require_roster(direction, "stability_study");
  validate(cfg, ops);
  const double dn = std::sqrt(inner_product(direction, direction));
  if (!(dn > 0.0)) throw ArgumentError("stability_study: direction must be nonzero");
  const std::size_t steps = cfg.steps();
  if (path.directions != noise.directions() || path.steps < steps ||
      std::abs(path.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw ArgumentError("stability_study: path does not match the integrator");
  }
  const GalerkinLevel level = effective_level(cfg, ops.basis());

  StateVector x = project_Pn(phi0, level);
  StateVector perturbed = phi0;
  perturbed.axpy(delta / dn, direction);
  StateVector y = project_Pn(perturbed, level);

  StabilityReport rep;
  rep.delta = delta;
  FunctionalAccumulator fx, fy;
  double last_budget = 0.0;
  auto record = [&](std::size_t m) {
    const double t = static_cast<double>(m) * cfg.dt;
    const StateVector psi = y - x;
    const double p2 = inner_product(psi, psi);
    rep.times.push_back(t);
    rep.psi2.push_back(p2);
    rep.sup_psi2 = std::max(rep.sup_psi2, p2);
    const double vx = ops.v2(x), vy = ops.v2(y);
    const double b = 1.0 + vx * vx + vy * vy;
    if (m > 0) rep.budget += 0.5 * cfg.dt * (last_budget + b);
    last_budget = b;
    rep.horizon = t;
    const double a = fx.add(vx, ops.a2(x), cfg.dt);
    const double c = fy.add(vy, ops.a2(y), cfg.dt);
    return a > cfg.halt_above || c > cfg.halt_above || !std::isfinite(a + c);
  };

  bool truncated = record(0);
  std::vector<double> dW(noise.directions());
  for (std::size_t m = 0; m < steps && !truncated; ++m) {
    for (std::size_t k = 0; k < dW.size(); ++k) dW[k] = path.at(k, m);
    StateVector nx = step(cfg.scheme, ops, noise, x, cfg.dt, dW, level);
    StateVector ny = step(cfg.scheme, ops, noise, y, cfg.dt, dW, level);
    if (!nx.all_finite() || !ny.all_finite()) {
      truncated = true;
      break;
    }
    x = std::move(nx);
    y = std::move(ny);
    truncated = record(m + 1);
  }
  rep.truncated = truncated;
  return rep;
}

// ---------------------------------------------------------------------------

OrderReport strong_order_study(const EvolutionOperators& ops, const NoiseSpec& noise,
                               const StateVector& phi0, const IntegratorConfig& cfg, int m,
                               std::size_t paths, std::uint64_t seed, unsigned threads) {
  if (m < 3) throw ArgumentError("strong_order_study: need m >= 3 refinements");
  if (paths < 1) throw ArgumentError("strong_order_study: need at least one path");
  validate(cfg, ops);
  const int depth = m + 3;
  const std::size_t steps = cfg.steps();
  if (paths > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("too many paths");

  std::vector<std::vector<double>> errs(paths, std::vector<double>(static_cast<std::size_t>(m) + 1));
  parallel_for(paths, threads, [&](std::size_t r) {
    std::vector<WienerPath> ladder;
    ladder.push_back(sample_path(seed, cfg.dt, steps, noise.directions(), static_cast<std::uint32_t>(r)));
    for (int j = 1; j <= depth; ++j) ladder.push_back(refine_path(ladder.back()));
    std::vector<StateVector> finals;
    for (int j = 0; j <= depth; ++j) {
      if (j > m && j < depth) continue;
      IntegratorConfig c = cfg;
      c.dt = ladder[static_cast<std::size_t>(j)].dt;
      c.state_stride = 0;
      finals.push_back(integrate(ops, noise, phi0, c, ladder[static_cast<std::size_t>(j)]).final_state);
    }
    const StateVector& ref = finals.back();
    for (int j = 0; j <= m; ++j) {
      const StateVector d = finals[static_cast<std::size_t>(j)] - ref;
      errs[r][static_cast<std::size_t>(j)] = std::sqrt(inner_product(d, d));
    }
  });

  OrderReport rep;
  rep.paths = paths;
  rep.reference_dt = cfg.dt / static_cast<double>(1 << depth);
  for (int j = 0; j <= m; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < paths; ++r) mean += errs[r][static_cast<std::size_t>(j)];
    rep.dts.push_back(cfg.dt / static_cast<double>(1 << j));
    rep.errors.push_back(mean / static_cast<double>(paths));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rep.dts.size());
  for (std::size_t j = 0; j < rep.dts.size(); ++j) {
    const double x = std::log(rep.dts[j]), y = std::log(rep.errors[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (j > 0 && !(rep.errors[j] < rep.errors[j - 1])) rep.monotone = false;
  }
  rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!rep.monotone) rep.warning = "error ladder is not monotone in dt";
  return rep;
}

// ---------------------------------------------------------------------------

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

GlobalityReport globality_experiment(const EnsembleSpec& ens, double cap) {
  if (!(cap > 0.0)) throw ArgumentError("globality_experiment: cap must be positive");
  EnsembleSpec run = ens;
  run.cfg.halt_above = cap;
  struct Outcome {
    bool blowup = false, diverged = false;
    double terminal = 0.0;
  };
  auto outcomes = run_ensemble<Outcome>(run, [&](std::size_t, const Trajectory& tr) {
    Outcome o;
    o.blowup = blowup_flag(tr, cap).has_value();
    o.diverged = tr.divergence_time.has_value();
    o.terminal = o.diverged ? std::numeric_limits<double>::infinity() : tr.functional.back();
    return o;
  });
  GlobalityReport rep;
  rep.dim = ens.ops->spec().dim;
  rep.replicates = ens.replicates;
  rep.cap = cap;
  for (const auto& o : outcomes) {
    rep.blowups += o.blowup;
    rep.divergences += o.diverged;
    rep.terminal.push_back(o.terminal);
  }
  rep.blowup_fraction = rep.replicates ? static_cast<double>(rep.blowups) / static_cast<double>(rep.replicates) : 0.0;
  rep.quantile_levels = {0.05, 0.25, 0.5, 0.75, 0.95};
  for (double q : rep.quantile_levels) rep.functional_quantiles.push_back(quantile(rep.terminal, q));
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<ExitProbability> exit_probability(const EnsembleSpec& ens, double M,
                                              const std::vector<double>& S) {
  if (!(M > 1.0)) throw ArgumentError("exit_probability: M must exceed 1");
  auto hits = run_ensemble<std::vector<char>>(ens, [&](std::size_t, const Trajectory& tr) {
    const double r = M + std::sqrt(tr.v2[0]);
    const double bound = r * r;
    double tau = ens.cfg.horizon;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr.functional[i] > bound) {
        tau = i > 0 ? tr.times[i - 1] : 0.0;
        break;
      }
    }
    const double level = tr.v2[0] + (M - 1.0) * (M - 1.0);
    std::vector<char> out;
    for (double s : S) {
      const double t = std::min(tau, s);
      double f = tr.functional[0];
      for (std::size_t i = 0; i < tr.size() && tr.times[i] <= t * (1 + 1e-12); ++i) f = tr.functional[i];
      out.push_back(f > level);
    }
    return out;
  });
  std::vector<ExitProbability> out;
  const double R = static_cast<double>(ens.replicates);
  for (std::size_t j = 0; j < S.size(); ++j) {
    double c = 0.0;
    for (const auto& h : hits) c += h[j];
    const double p = c / R;
    out.push_back({S[j], p, std::sqrt(p * (1.0 - p) / R)});
  }
  return out;
}

}  // namespace spdegal
