#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spdegal/errors.hpp"
#include "spdegal/sde.hpp"

using namespace spdegal;

namespace {

ModelSpec linear_cbf(double nu) {
  ModelSpec s = default_model(ModelKind::cbf, 2);
  s.nu = nu;
  s.darcy = 0;
  s.forchheimer = 0;
  return s;
}

// sin(k.x) e on a single mode pair
StateVector single_mode(const EvolutionOperators& ops, Mode k, std::array<double, 2> e, double amp) {
  const SpectralBasis& b = ops.basis();
  StateVector v = ops.zero_state();
  for (int c = 0; c < 2; ++c) {
    v.field(0).at(c, b.index_of(k)) = cplx(0, -0.5 * amp * e[c]);
    v.field(0).at(c, b.index_of({-k[0], -k[1], 0})) = cplx(0, 0.5 * amp * e[c]);
  }
  return v;
}

}  // namespace

TEST_CASE("exponential scheme is exact on heat decay") {
  auto b = testutil::basis(2, 4);
  const double nu = 0.7;
  EvolutionOperators ops(linear_cbf(nu), b);
  NoiseSpec none;
  StateVector phi0 = single_mode(ops, {1, 2, 0}, {2 / std::sqrt(5.0), -1 / std::sqrt(5.0)}, 1.3);
  const double lambda = nu * 5.0;
  for (double dt : {0.5, 0.1, 0.013}) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.horizon = dt * 20;
    auto tr = integrate(ops, none, phi0, cfg, sample_path(0, dt, 20, 0));
    const double h0 = std::sqrt(tr.h2[0]);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double expect = std::exp(-lambda * tr.times[i]) * h0;
      CHECK(std::abs(std::sqrt(tr.h2[i]) - expect) <= 1e-13 * h0);
    }
  }
  IntegratorConfig si;
  si.scheme = Scheme::semi_implicit;
  si.dt = 0.1;
  StateVector one = step(Scheme::semi_implicit, ops, none, phi0, 0.1, {}, b->full_level());
  CHECK(testutil::max_abs_diff(one, (1.0 / (1.0 + lambda * 0.1)) * phi0) < 1e-16);
}

TEST_CASE("multiplicative noise keeps zero an equilibrium") {
  auto b = testutil::basis(2, 3);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec n = default_noise(ops, 2, 0.5, 1.0);
  for (auto& s : n.shapes) s.set_zero();
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 0.5;
  auto tr = integrate(ops, n, ops.zero_state(), cfg, sample_path(1, 0.01, 50, 2));
  CHECK(testutil::max_abs(tr.final_state) == 0.0);
}

TEST_CASE("stability guard and path checks") {
  auto b = testutil::basis(2, 4);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec none;
  IntegratorConfig cfg;
  cfg.scheme = Scheme::euler_maruyama;
  cfg.dt = 0.1;  // lambda_max = 32
  cfg.horizon = 1;
  CHECK_THROWS_AS(integrate(ops, none, ops.zero_state(), cfg, sample_path(0, 0.1, 10, 0)), ConfigError);
  cfg.dt = 0.01;
  CHECK_THROWS_AS(integrate(ops, none, ops.zero_state(), cfg, sample_path(0, 0.01, 50, 0)), ArgumentError);
  cfg.level = {3};
  CHECK_THROWS_AS(integrate(ops, none, ops.zero_state(), cfg, sample_path(0, 0.01, 100, 0)), ConfigError);
}

TEST_CASE("one-step consistency and scheme agreement") {
  auto b = testutil::basis(2, 4);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec none;
  std::mt19937_64 rng(3);
  StateVector phi = random_state(ops, rng, 2.0);
  StateVector f = ops.apply_A(phi) + ops.apply_B(phi, phi) + ops.apply_R(phi);
  std::vector<double> err;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    StateVector s = step(Scheme::exp_euler_maruyama, ops, none, phi, dt, {}, b->full_level());
    StateVector fd = (1.0 / dt) * (s - phi);
    err.push_back(testutil::max_abs_diff(fd, -1.0 * f));
    StateVector em = step(Scheme::euler_maruyama, ops, none, phi, dt, {}, b->full_level());
    StateVector si = step(Scheme::semi_implicit, ops, none, phi, dt, {}, b->full_level());
    CHECK(testutil::max_abs_diff(em, s) < 10 * dt * dt * testutil::max_abs(f) * 32);
    CHECK(testutil::max_abs_diff(si, s) < 10 * dt * dt * testutil::max_abs(f) * 32);
  }
  const double order = std::log2(err[0] / err[1]);
  CHECK(order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("discrete energy identity residual is second order") {
  auto b = testutil::basis(2, 4);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec none;
  std::mt19937_64 rng(4);
  StateVector phi = random_state(ops, rng, 1.5);
  const double rate = ops.v2(phi) + inner_product(ops.apply_R(phi), phi);
  for (Scheme sch : {Scheme::euler_maruyama, Scheme::exp_euler_maruyama}) {
    std::vector<double> res;
    for (double dt : {2e-3, 1e-3}) {
      StateVector s = step(sch, ops, none, phi, dt, {}, b->full_level());
      res.push_back(std::abs(ops.h2(s) - ops.h2(phi) + 2 * dt * rate));
    }
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("Galerkin levels agree on invariant single-mode dynamics") {
  auto b = testutil::basis(2, 6);
  EvolutionOperators ops(linear_cbf(1.0), b);
  StateVector phi0 = single_mode(ops, {1, 0, 0}, {0, 1}, 1.0);
  NoiseSpec n = default_noise(ops, 1, 0.3, 0.5);
  n.shapes[0] = phi0;
  auto path = sample_path(11, 0.01, 100, 1);
  IntegratorConfig lo, hi;
  lo.dt = hi.dt = 0.01;
  lo.horizon = hi.horizon = 1.0;
  lo.level = b->level_for_radius(2);
  hi.level = b->level_for_radius(6);
  auto a = integrate(ops, n, phi0, lo, path);
  auto c = integrate(ops, n, phi0, hi, path);
  CHECK(a.final_state == c.final_state);
}

TEST_CASE("Ito isometry for additive linear noise") {
  auto b = testutil::basis(2, 1);
  EvolutionOperators ops(linear_cbf(1.0), b);
  NoiseSpec n = default_noise(ops, 1, 0.8, 0.0);
  const double dt = 0.005, T = 0.5, lambda = 1.0;
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.horizon = T;
  const int samples = 10000;
  std::vector<double> x(samples);
  for (int r = 0; r < samples; ++r) {
    auto path = sample_path(2024, dt, 100, 1, static_cast<std::uint32_t>(r));
    auto tr = integrate(ops, n, ops.zero_state(), cfg, path);
    x[r] = inner_product(tr.final_state, n.shapes[0]);
  }
  double mean = 0, m2 = 0;
  for (double v : x) mean += v;
  mean /= samples;
  for (double v : x) m2 += (v - mean) * (v - mean);
  const double var = m2 / (samples - 1);
  const double expect = 0.64 * (1 - std::exp(-2 * lambda * T)) / (2 * lambda);
  const double se = expect * std::sqrt(2.0 / (samples - 1));
  CHECK(std::abs(var - expect) < 3 * se);
}

TEST_CASE("stopping tracker and blow-up flag") {
  auto b = testutil::basis(2, 4);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  std::mt19937_64 rng(5);
  StateVector phi0 = random_state(ops, rng, 2.0);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1;
  NoiseSpec none;
  auto tr = integrate(ops, none, phi0, cfg, sample_path(0, 0.01, 100, 0));

  // independent quadrature
  double mx = 0, integral = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    mx = std::max(mx, tr.v2[i]);
    if (i) integral += (tr.times[i] - tr.times[i - 1]) * (tr.a2[i] + tr.a2[i - 1]) / 2;
  }
  CHECK(std::abs(tr.functional.back() - (mx + integral)) <= 1e-12 * (mx + integral));

  const double top = tr.functional.back();
  auto st = track_stopping(tr, {2 * top, 4 * top}, 1.0, 1.0);
  for (double t : st.tau) CHECK(std::isinf(t));
  CHECK(st.member);
  for (std::size_t i = 1; i < st.functional.size(); ++i) CHECK(st.functional[i] >= st.functional[i - 1]);
  CHECK(st.functional.back() == doctest::Approx(top).epsilon(1e-14));

  auto grow = track_stopping(tr, {0.25 * top, 0.5 * top, top * 0.99}, 0.0, 1.0);
  CHECK(grow.tau[0] <= grow.tau[1]);
  CHECK(grow.tau[1] <= grow.tau[2]);

  auto f0 = blowup_flag(tr, 1e-300);
  REQUIRE(f0.has_value());
  CHECK(*f0 == 0.0);
  CHECK_FALSE(blowup_flag(tr, std::numeric_limits<double>::infinity()).has_value());
  auto a = blowup_flag(tr, 0.5 * top), c = blowup_flag(tr, 0.9 * top);
  REQUIRE(a.has_value());
  REQUIRE(c.has_value());
  CHECK(*a <= *c);

  Trajectory empty;
  CHECK_THROWS_AS(track_stopping(empty, {1.0}, 1, 1), ArgumentError);
}

TEST_CASE("halt cap freezes the run") {
  auto b = testutil::basis(2, 3);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec n = default_noise(ops, 2, 5.0, 0.0);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.horizon = 1;
  cfg.halt_above = 0.5;
  auto tr = integrate(ops, n, ops.zero_state(), cfg, sample_path(3, 0.01, 100, 2));
  REQUIRE(tr.halt_time.has_value());
  CHECK(tr.times.back() == *tr.halt_time);
  CHECK(tr.functional.back() > 0.5);
  CHECK(tr.functional[tr.size() - 2] <= 0.5);
}
