#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spdegal/errors.hpp"
#include "spdegal/noise.hpp"
#include "spdegal/philox.hpp"

using namespace spdegal;

TEST_CASE("Philox4x32-10 known answers") {
  auto r = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(r == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(r == PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(r == PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniform and quantile") {
  CHECK(philox_uniform(0, 0) > 0.0);
  CHECK(philox_uniform(0xffffffffu, 0xffffffffu) < 1.0);
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-14));
}

TEST_CASE("Wiener path sampling") {
  auto empty = sample_path(1, 0.1, 10, 0);
  CHECK(empty.increments.empty());
  auto a = sample_path(42, 0.01, 100, 3);
  auto b = sample_path(42, 0.01, 100, 3);
  CHECK(a.increments == b.increments);
  auto c = sample_path(42, 0.01, 100, 3, 1);
  CHECK(a.increments != c.increments);
  CHECK(a.at(0, 0) != a.at(1, 0));
  CHECK_THROWS_AS(sample_path(1, 0.0, 10, 1), ArgumentError);
  CHECK_THROWS_AS(sample_path(1, -1.0, 10, 1), ArgumentError);

  const double dt = 0.02;
  const std::size_t n = 100000;
  auto big = sample_path(7, dt, n, 1);
  double mean = 0, var = 0;
  for (double x : big.increments) mean += x;
  mean /= n;
  for (double x : big.increments) var += (x - mean) * (x - mean);
  var /= n - 1;
  CHECK(std::abs(mean) < 4 * std::sqrt(dt / n));
  CHECK(std::abs(var - dt) < 0.05 * dt);
}

TEST_CASE("Brownian bridge refinement") {
  auto p = sample_path(3, 0.1, 16, 2);
  auto f = refine_path(p);
  CHECK(f.steps == 32);
  CHECK(f.dt == 0.05);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t s = 0; s < 16; ++s) {
      CHECK(std::abs(f.at(k, 2 * s) + f.at(k, 2 * s + 1) - p.at(k, s)) <= 1e-15);
    }
  }
  auto f2 = refine_path(p, 2);
  CHECK(f2.steps == 64);
  CHECK(f2.dt == doctest::Approx(0.025));
  CHECK(refine_path(p, 2).increments == refine_path(refine_path(p)).increments);
  for (int m = 1; m <= 6; ++m) {
    auto c = coarsen_path(refine_path(p, m), m);
    for (std::size_t j = 0; j < p.increments.size(); ++j) {
      CHECK(std::abs(c.increments[j] - p.increments[j]) <= 1e-13);
    }
  }
  // fine increments keep variance dt / 2
  auto big = refine_path(sample_path(9, 0.04, 50000, 1));
  double var = 0;
  for (double x : big.increments) var += x * x;
  var /= big.increments.size();
  CHECK(std::abs(var - 0.02) < 0.05 * 0.02);
}

TEST_CASE("affine noise evaluation") {
  auto b = testutil::basis(2, 3);
  EvolutionOperators ops(default_model(ModelKind::boussinesq, 2), b);
  std::mt19937_64 rng(1);
  NoiseSpec add = default_noise(ops, 3, 0.2, 0.0);
  validate(add, ops);
  CHECK(add.additive());
  StateVector phi = random_state(ops, rng);
  auto g = eval_g(add, phi);
  auto g0 = eval_g(add, ops.zero_state());
  REQUIRE(g.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(g[k] == g0[k]);
    CHECK(inner_product(add.shapes[k], add.shapes[k]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(testutil::max_abs_diff(g[k], 0.2 * add.shapes[k]) == 0.0);
    CHECK(divergence_defect(*b, add.shapes[k].field(0)) < 1e-15);
  }
  CHECK(inner_product(add.shapes[0], add.shapes[1]) == doctest::Approx(0.0));

  NoiseSpec mult = default_noise(ops, 2, 0.1, 1.0);
  auto rep = lipschitz_report(mult, ops);
  for (double L : rep.lipschitz) CHECK(L == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(rep.lipschitz[0] == doctest::Approx(0.141421).epsilon(1e-6));
  auto rep0 = lipschitz_report(add, ops);
  for (double L : rep0.lipschitz) CHECK(L == 0.0);
  NoiseSpec dbl = mult;
  for (auto& s : dbl.sigma) s *= 2;
  auto rep2 = lipschitz_report(dbl, ops);
  for (int s = 0; s < 3; ++s) {
    CHECK(rep2.lipschitz[s] == doctest::Approx(2 * rep.lipschitz[s]));
    CHECK(rep2.growth[s] == doctest::Approx(2 * rep.growth[s]));
  }

  StateVector p1 = random_state(ops, rng), p2 = random_state(ops, rng);
  auto a = eval_g(mult, p1), c = eval_g(mult, p2);
  double num = 0;
  for (std::size_t k = 0; k < a.size(); ++k) num += inner_product(a[k] - c[k], a[k] - c[k]);
  StateVector d = p1 - p2;
  CHECK(std::sqrt(num) == doctest::Approx(rep.lipschitz[0] * std::sqrt(inner_product(d, d))).epsilon(1e-12));

  auto sampled = sampled_lipschitz(mult, ops, 1000, 5);
  for (int s = 0; s < 3; ++s) CHECK(std::abs(sampled[s] - rep.lipschitz[s]) < 1e-10);

  NoiseSpec masked = default_noise(ops, 2, 0.1, 1.0, {true, false});
  for (const auto& z : masked.shapes[0].field(1).data()) CHECK(z == cplx{});
  auto sm = sampled_lipschitz(masked, ops, 200, 6);
  for (int s = 0; s < 3; ++s) CHECK(std::abs(sm[s] - lipschitz_report(masked, ops).lipschitz[s]) < 1e-10);

  NoiseSpec bad = add;
  bad.sigma[1] = -1;
  bad.gain[2] = -1;
  try {
    validate(bad, ops);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("noise.sigma[1]") != std::string::npos);
    CHECK(std::string(e.what()).find("noise.gain[2]") != std::string::npos);
  }
}

TEST_CASE("custom noise hook is sampled") {
  auto b = testutil::basis(2, 2);
  EvolutionOperators ops(default_model(ModelKind::cbf, 2), b);
  NoiseSpec n;
  n.sigma = {1.0};
  n.gain = {0.0};
  n.custom = [](const StateVector& phi) { return std::vector<StateVector>{0.3 * phi}; };
  auto rep = lipschitz_report(n, ops);
  CHECK(rep.sampled);
  for (double L : rep.lipschitz) CHECK(L == doctest::Approx(0.3).epsilon(1e-12));
}
