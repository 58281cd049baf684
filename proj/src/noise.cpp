#include "spdegal/noise.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>

#include "spdegal/errors.hpp"
#include "spdegal/philox.hpp"

namespace spdegal {

double normal_quantile(double u) {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

double philox_normal(std::uint64_t seed, std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                     std::uint32_t c3) {
  const auto r = philox4x32({c0, c1, c2, c3}, philox_key(seed));
  return normal_quantile(philox_uniform(r[0], r[1]));
}

std::vector<double> WienerPath::step_increments(std::size_t step) const {
  std::vector<double> out(directions);
  for (std::size_t k = 0; k < directions; ++k) out[k] = at(k, step);
  return out;
}

namespace {

void check_counter_range(std::size_t steps, std::size_t directions) {
  constexpr std::size_t lim = std::numeric_limits<std::uint32_t>::max();
  if (steps > lim || directions > lim) throw ResourceError("path exceeds the 2^32 counter range");
}

}  // namespace

WienerPath sample_path(std::uint64_t seed, double dt, std::size_t steps, std::size_t directions,
                       std::uint32_t stream) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("sample_path: dt must be positive");
  if (steps == 0) throw ArgumentError("sample_path: steps must be >= 1");
  check_counter_range(steps, directions);
  WienerPath p;
  p.seed = seed;
  p.stream = stream;
  p.dt = dt;
  p.steps = steps;
  p.directions = directions;
  p.increments.resize(steps * directions);
  const double sd = std::sqrt(dt);
  for (std::size_t k = 0; k < directions; ++k) {
    for (std::size_t s = 0; s < steps; ++s) {
      p.increments[k * steps + s] = sd * philox_normal(seed, static_cast<std::uint32_t>(s),
                                                       static_cast<std::uint32_t>(k), stream, 0);
    }
  }
  return p;
}

WienerPath refine_path(const WienerPath& path) {
  check_counter_range(2 * path.steps, path.directions);
  WienerPath f = path;
  f.level = path.level + 1;
  f.dt = 0.5 * path.dt;
  f.steps = 2 * path.steps;
  f.increments.assign(f.steps * f.directions, 0.0);
  const double half_sd = 0.5 * std::sqrt(path.dt);
  for (std::size_t k = 0; k < path.directions; ++k) {
    for (std::size_t s = 0; s < path.steps; ++s) {
      const double dw = path.at(k, s);
      const double z = philox_normal(path.seed, static_cast<std::uint32_t>(s),
                                     static_cast<std::uint32_t>(k), path.stream, f.level);
      const double first = 0.5 * dw + half_sd * z;
      f.increments[k * f.steps + 2 * s] = first;
      f.increments[k * f.steps + 2 * s + 1] = dw - first;
    }
  }
  return f;
}

WienerPath refine_path(const WienerPath& path, int times) {
  WienerPath p = path;
  for (int i = 0; i < times; ++i) p = refine_path(p);
  return p;
}

WienerPath coarsen_path(const WienerPath& path, int times) {
  const std::size_t block = std::size_t{1} << times;
  if (times < 0 || path.steps % block != 0) {
    throw ArgumentError("coarsen_path: steps not divisible by 2^times");
  }
  WienerPath c = path;
  c.level = path.level >= static_cast<std::uint32_t>(times) ? path.level - times : 0;
  c.dt = path.dt * static_cast<double>(block);
  c.steps = path.steps / block;
  c.increments.assign(c.steps * c.directions, 0.0);
  for (std::size_t k = 0; k < path.directions; ++k) {
    for (std::size_t s = 0; s < c.steps; ++s) {
      double sum = 0.0;
      for (std::size_t j = 0; j < block; ++j) sum += path.at(k, s * block + j);
      c.increments[k * c.steps + s] = sum;
    }
  }
  return c;
}

bool NoiseSpec::additive() const {
  if (custom) return false;
  for (double g : gain) {
    if (g != 0.0) return false;
  }
  return true;
}

StateVector default_shape(const EvolutionOperators& ops, std::size_t k,
                          const std::vector<bool>& mask) {
  const SpectralBasis& b = ops.basis();
  const int d = b.dim();
  std::size_t pos = 0, count = 0;
  for (; pos < b.size(); ++pos) {
    const Mode& m = b.mode(pos);
    const bool positive = m[0] > 0 || (m[0] == 0 && (m[1] > 0 || (m[1] == 0 && m[2] > 0)));
    if (!positive) continue;
    if (count == k) break;
    ++count;
  }
  if (pos == b.size()) throw ConfigError("noise direction " + std::to_string(k) + " exceeds the basis");
  const Mode& m = b.mode(pos);
  const std::size_t neg = b.conjugate(pos);

  // direction transverse to k
  std::array<double, 3> e{};
  if (d == 2) {
    e = {-static_cast<double>(m[1]), static_cast<double>(m[0]), 0.0};
  } else {
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(m[a]) < std::abs(m[axis])) axis = a;
    }
    e[axis] = 1.0;
    const double kk = norm2(m);
    const double ke = m[axis];
    for (int a = 0; a < 3; ++a) e[a] -= ke * m[a] / kk;
  }
  double en = 0.0;
  for (double x : e) en += x * x;
  en = std::sqrt(en);

  StateVector psi = ops.zero_state();
  for (std::size_t f = 0; f < psi.field_count(); ++f) {
    if (!mask.empty() && !mask[f]) continue;
    Field& x = psi.field(f);
    for (int c = 0; c < x.components(); ++c) {
      const double w = x.components() == 1 ? 1.0 : e[c] / en;
      x.at(c, pos) = 0.5 * w;
      x.at(c, neg) = 0.5 * w;
    }
  }
  const double norm = std::sqrt(inner_product(psi, psi));
  if (norm > 0.0) psi *= 1.0 / norm;
  return psi;
}

NoiseSpec default_noise(const EvolutionOperators& ops, std::size_t directions, double sigma,
                        double gain, std::vector<bool> mask) {
  NoiseSpec n;
  n.mask = std::move(mask);
  for (std::size_t k = 0; k < directions; ++k) {
    n.sigma.push_back(sigma);
    n.gain.push_back(gain);
    n.shapes.push_back(default_shape(ops, k, n.mask));
  }
  return n;
}

void validate(const NoiseSpec& spec, const EvolutionOperators& ops) {
  std::vector<std::string> errs;
  const std::size_t K = spec.sigma.size();
  if (spec.gain.size() != K) errs.push_back("noise.gain: length differs from noise.sigma");
  if (!spec.custom && spec.shapes.size() != K) errs.push_back("noise.shapes: length differs from noise.sigma");
  for (std::size_t k = 0; k < K; ++k) {
    if (!(spec.sigma[k] > 0.0) || !std::isfinite(spec.sigma[k])) {
      errs.push_back("noise.sigma[" + std::to_string(k) + "]: must be positive and finite");
    }
    if (k < spec.gain.size() && (!(spec.gain[k] >= 0.0) || !std::isfinite(spec.gain[k]))) {
      errs.push_back("noise.gain[" + std::to_string(k) + "]: must be >= 0 and finite");
    }
  }
  if (!spec.mask.empty() && spec.mask.size() != ops.layout().size()) {
    errs.push_back("noise.fields: mask length differs from the model roster");
  }
  for (std::size_t k = 0; k < spec.shapes.size(); ++k) {
    const StateVector& s = spec.shapes[k];
    try {
      ops.require_roster(s, "noise shape");
      for (std::size_t f = 0; f < s.field_count(); ++f) {
        if (hermitian_defect(ops.basis(), s.field(f)) > 1e-14) {
          errs.push_back("noise.shapes[" + std::to_string(k) + "]: not real-valued");
        }
        if (ops.layout()[f].solenoidal) require_solenoidal(ops.basis(), s.field(f), s.name(f));
      }
    } catch (const Error& e) {
      errs.push_back("noise.shapes[" + std::to_string(k) + "]: " + e.what());
    }
  }
  if (errs.empty()) return;
  std::string msg = "invalid noise:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw ConfigError(msg);
}

std::vector<StateVector> eval_g(const NoiseSpec& spec, const StateVector& phi) {
  if (spec.custom) return spec.custom(phi);
  std::vector<StateVector> out;
  out.reserve(spec.directions());
  for (std::size_t k = 0; k < spec.directions(); ++k) {
    spec.shapes[k].require_compatible(phi, "eval_g");
    StateVector g = spec.shapes[k];
    if (spec.gain[k] != 0.0) {
      for (std::size_t f = 0; f < g.field_count(); ++f) {
        if (spec.masked(f)) g.field(f).axpy(spec.gain[k], phi.field(f));
      }
    }
    g *= spec.sigma[k];
    out.push_back(std::move(g));
  }
  return out;
}

LipschitzReport lipschitz_report(const NoiseSpec& spec, const EvolutionOperators& ops) {
  LipschitzReport r;
  if (spec.custom) {
    r.lipschitz = sampled_lipschitz(spec, ops, 1000, 0x5eed);
    r.growth = r.lipschitz;
    r.sampled = true;
    return r;
  }
  bool any_field = false;
  for (std::size_t f = 0; f < ops.layout().size(); ++f) any_field = any_field || spec.masked(f);
  double l2 = 0.0;
  for (std::size_t k = 0; k < spec.directions(); ++k) {
    l2 += spec.sigma[k] * spec.sigma[k] * spec.gain[k] * spec.gain[k];
  }
  const double L = any_field ? std::sqrt(l2) : 0.0;
  const double alphas[3] = {0.0, 0.5, 1.0};
  for (int s = 0; s < 3; ++s) {
    double g2 = 0.0;
    for (std::size_t k = 0; k < spec.directions(); ++k) {
      g2 += spec.sigma[k] * spec.sigma[k] * sobolev2(spec.shapes[k], alphas[s], ops.scales());
    }
    r.lipschitz[s] = L;
    r.growth[s] = L + std::sqrt(g2);
  }
  return r;
}

std::array<double, 3> sampled_lipschitz(const NoiseSpec& spec, const EvolutionOperators& ops,
                                        std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double alphas[3] = {0.0, 0.5, 1.0};
  std::array<double, 3> best{};
  for (std::size_t s = 0; s < samples; ++s) {
    StateVector a = random_state(ops, rng);
    StateVector diff = random_state(ops, rng);
    for (std::size_t f = 0; f < diff.field_count(); ++f) {
      if (!spec.masked(f)) diff.field(f) *= 0.0;
    }
    StateVector b = a + diff;
    const auto ga = eval_g(spec, a);
    const auto gb = eval_g(spec, b);
    for (int sc = 0; sc < 3; ++sc) {
      const double den = sobolev2(diff, alphas[sc], ops.scales());
      if (den == 0.0) continue;
      double num = 0.0;
      for (std::size_t k = 0; k < ga.size(); ++k) {
        num += sobolev2(gb[k] - ga[k], alphas[sc], ops.scales());
      }
      best[sc] = std::max(best[sc], std::sqrt(num / den));
    }
  }
  return best;
}

StateVector random_state(const EvolutionOperators& ops, std::mt19937_64& rng, double decay,
                         double max_mu) {
  const SpectralBasis& b = ops.basis();
  auto normal = [&rng] {
    const std::uint64_t r = rng();
    return normal_quantile(philox_uniform(static_cast<std::uint32_t>(r >> 32),
                                          static_cast<std::uint32_t>(r)));
  };
  StateVector v = ops.zero_state();
  for (std::size_t f = 0; f < v.field_count(); ++f) {
    Field& x = v.field(f);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::size_t j = b.conjugate(i);
      if (j < i) continue;
      const double w = decay == 0.0 ? 1.0 : std::pow(1.0 + b.mu(i), -decay);
      for (int c = 0; c < x.components(); ++c) {
        cplx z{normal(), normal()};
        if (max_mu > 0.0 && b.mu(i) > max_mu) z = 0.0;
        z *= w;
        x.at(c, i) = z;
        x.at(c, j) = std::conj(z);
      }
    }
    if (ops.layout()[f].solenoidal) leray_project_inplace(b, x);
  }
  return v;
}

}  // namespace spdegal
