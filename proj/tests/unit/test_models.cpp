#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spdegal/errors.hpp"

using namespace spdegal;
using testutil::max_abs;
using testutil::max_abs_diff;
using testutil::random_state;

namespace {

const ModelKind kAll[] = {ModelKind::cbf,    ModelKind::mhd,        ModelKind::boussinesq,
                          ModelKind::dynamo, ModelKind::micropolar, ModelKind::tropical};

ModelSpec test_spec(ModelKind kind, int dim) {
  ModelSpec s = default_model(kind, dim);
  if (kind == ModelKind::dynamo && dim == 3) s.coriolis = 0.7;
  if (kind == ModelKind::micropolar) s.grad_div = 0.8;
  return s;
}

void set_cos(const SpectralBasis& b, Field& f, int comp, Mode k, double amp) {
  f.at(comp, b.index_of(k)) += 0.5 * amp;
  f.at(comp, b.index_of({-k[0], -k[1], -k[2]})) += 0.5 * amp;
}

void set_sin(const SpectralBasis& b, Field& f, int comp, Mode k, double amp) {
  f.at(comp, b.index_of(k)) += cplx(0, -0.5 * amp);
  f.at(comp, b.index_of({-k[0], -k[1], -k[2]})) += cplx(0, 0.5 * amp);
}

}  // namespace

TEST_CASE("model validation") {
  ModelSpec s = default_model(ModelKind::cbf, 2);
  CHECK(validation_errors(s).empty());
  s.exponent = 3.5;
  auto errs = validation_errors(s);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("r ∈ [2,3]") != std::string::npos);
  ModelSpec dyn = default_model(ModelKind::dynamo, 2);
  dyn.coriolis = 1.0;
  errs = validation_errors(dyn);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("which is zero when d=2") != std::string::npos);
  ModelSpec mp = default_model(ModelKind::micropolar, 2);
  mp.chi = 0;
  mp.nu = -1;
  CHECK(validation_errors(mp).size() == 2);
  CHECK_THROWS_AS(validate(mp), ConfigError);
  CHECK_THROWS_AS(model_kind_from_string("navier"), ConfigError);
  for (auto k : kAll) CHECK(model_kind_from_string(to_string(k)) == k);
}

TEST_CASE("rosters") {
  auto b = testutil::basis(3, 1);
  const char* expect[6][3] = {{"u"}, {"u", "B"}, {"u", "theta"}, {"u", "B", "theta"},
                              {"u", "w", "B"}, {"u", "v", "theta"}};
  for (int m = 0; m < 6; ++m) {
    EvolutionOperators ops(test_spec(kAll[m], 3), b);
    auto r = ops.zero_state().roster();
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == expect[m][i]);
  }
}

TEST_CASE("apply_A examples") {
  auto b = testutil::basis(2, 2);
  ModelSpec s = default_model(ModelKind::cbf, 2);
  s.nu = 2;
  EvolutionOperators cbf(s, b);
  StateVector v = cbf.zero_state();
  set_sin(*b, v.field(0), 1, {1, 0, 0}, 1.0);
  StateVector a = cbf.apply_A(v);
  CHECK(max_abs_diff(a, 2.0 * v) == 0.0);

  ModelSpec m = default_model(ModelKind::mhd, 2);
  m.kappa = 3;
  EvolutionOperators mhd(m, b);
  StateVector w = mhd.zero_state();
  set_sin(*b, w.field(0), 0, {1, -1, 0}, 1.0);
  set_sin(*b, w.field(0), 1, {1, -1, 0}, 1.0);
  set_cos(*b, w.field(1), 0, {1, -1, 0}, 1.0);
  set_cos(*b, w.field(1), 1, {1, -1, 0}, 1.0);
  StateVector aw = mhd.apply_A(w);
  for (std::size_t j = 0; j < w.field(0).data().size(); ++j) {
    CHECK(aw.field(0).data()[j] == 2.0 * w.field(0).data()[j]);
    CHECK(aw.field(1).data()[j] == 6.0 * w.field(1).data()[j]);
  }

  auto b3 = testutil::basis(3, 2);
  ModelSpec mp = test_spec(ModelKind::micropolar, 3);
  mp.gamma = 1.3;
  EvolutionOperators micro(mp, b3);
  StateVector z = micro.zero_state();
  std::mt19937_64 rng(1);
  testutil::fill_random(*b3, z.field(1), rng);
  leray_project_inplace(*b3, z.field(1));
  StateVector az = micro.apply_A(z);
  for (std::size_t i = 0; i < b3->size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      CHECK(std::abs(az.field(1).at(c, i) - 1.3 * b3->mu(i) * z.field(1).at(c, i)) < 1e-12);
    }
  }
  // gradient direction picks up gamma + grad_div
  StateVector g = micro.zero_state();
  Field th(b3->size(), 1, false);
  set_cos(*b3, th, 0, {1, 1, 0}, 1.0);
  g.field(1) = differential(*b3, th, DiffKind::gradient);
  StateVector ag = micro.apply_A(g);
  for (std::size_t j = 0; j < g.field(1).data().size(); ++j) {
    CHECK(std::abs(ag.field(1).data()[j] - 2.0 * (1.3 + 0.8) * g.field(1).data()[j]) < 1e-12);
  }

  CHECK_THROWS_AS(mhd.apply_A(v), TypeError);
}

TEST_CASE("bilinear cancellation cases") {
  auto b = testutil::basis(2, 4);
  EvolutionOperators cbf(default_model(ModelKind::cbf, 2), b);
  StateVector shear = cbf.zero_state();
  set_sin(*b, shear.field(0), 0, {0, 1, 0}, 1.0);
  CHECK(max_abs(cbf.apply_B(shear, shear)) < 1e-15);

  // Taylor-Green (sin x cos y, -cos x sin y)
  StateVector tg = cbf.zero_state();
  Field& u = tg.field(0);
  const double q = 0.25;
  const std::size_t pp = b->index_of({1, 1, 0}), pm = b->index_of({1, -1, 0});
  const std::size_t mp = b->index_of({-1, 1, 0}), mm = b->index_of({-1, -1, 0});
  // sin x cos y = (e^{i(x+y)} + e^{i(x-y)} - e^{i(-x+y)} - e^{-i(x+y)}) / 4i
  u.at(0, pp) = cplx(0, -q);
  u.at(0, pm) = cplx(0, -q);
  u.at(0, mp) = cplx(0, q);
  u.at(0, mm) = cplx(0, q);
  // -cos x sin y
  u.at(1, pp) = cplx(0, q);
  u.at(1, pm) = cplx(0, -q);
  u.at(1, mp) = cplx(0, q);
  u.at(1, mm) = cplx(0, -q);
  REQUIRE(divergence_defect(*b, u) < 1e-15);
  CHECK(max_abs(cbf.apply_B(tg, tg)) < 1e-11);
  CHECK(max_abs(cbf.brute_force_B(tg, tg)) < 1e-11);

  EvolutionOperators mhd(default_model(ModelKind::mhd, 2), b);
  std::mt19937_64 rng(4);
  StateVector s = random_state(mhd, rng);
  s.field(1) = s.field(0);
  CHECK(max_abs(mhd.apply_B(s, s)) < 1e-11 * max_abs(s) * max_abs(s));
  CHECK(max_abs(mhd.brute_force_B(s, s)) < 1e-11 * max_abs(s) * max_abs(s));
}

TEST_CASE("pseudo-spectral B agrees with direct convolution") {
  for (int d : {2, 3}) {
    auto b = testutil::basis(d, d == 2 ? 4 : 2);
    for (auto kind : kAll) {
      EvolutionOperators ops(test_spec(kind, d), b);
      std::mt19937_64 rng(17 + static_cast<int>(kind));
      for (int s = 0; s < 5; ++s) {
        StateVector p = random_state(ops, rng);
        StateVector r = random_state(ops, rng);
        StateVector fast = ops.apply_B(p, r);
        StateVector slow = ops.brute_force_B(p, r);
        CHECK(max_abs_diff(fast, slow) <= 1e-11 * max_abs(slow));
        StateVector twice = ops.brute_force_B(2.0 * p, r);
        CHECK(max_abs_diff(twice, 2.0 * slow) <= 1e-13 * max_abs(slow));
      }
    }
  }
  EvolutionOperators big(default_model(ModelKind::cbf, 2), testutil::basis(2, 8));
  StateVector z = big.zero_state();
  CHECK_THROWS_AS(big.brute_force_B(z, z), ResourceError);
}

TEST_CASE("antisymmetry and positivity") {
  for (int d : {2, 3}) {
    auto b = testutil::basis(d, d == 2 ? 4 : 2);
    for (auto kind : kAll) {
      EvolutionOperators ops(test_spec(kind, d), b);
      std::mt19937_64 rng(31 + static_cast<int>(kind));
      for (int s = 0; s < 10; ++s) {
        StateVector p1 = random_state(ops, rng);
        StateVector p2 = random_state(ops, rng);
        StateVector p3 = random_state(ops, rng);
        const double n1 = std::sqrt(ops.v2(p1)), n2 = std::sqrt(ops.v2(p2)), n3 = std::sqrt(ops.v2(p3));
        const double e = inner_product(ops.apply_B(p1, p2), p2);
        CHECK(std::abs(e) <= 1e-10 * n1 * n2 * n2);
        const double t = inner_product(ops.apply_B(p1, p2), p3) + inner_product(ops.apply_B(p1, p3), p2);
        CHECK(std::abs(t) <= 1e-10 * n1 * n2 * n3);
        SplitR r = ops.split_R(p1);
        CHECK(inner_product(r.s_part, p1) >= -1e-12 * ops.h2(p1));
        StateVector sum = r.s_part + r.f_part;
        CHECK(max_abs_diff(sum, ops.apply_R(p1)) == 0.0);
      }
    }
  }
}

TEST_CASE("reactive term examples") {
  auto b = testutil::basis(2, 4);
  ModelSpec s = default_model(ModelKind::cbf, 2);
  s.darcy = 1;
  s.forchheimer = 0;
  EvolutionOperators lin(s, b);
  std::mt19937_64 rng(8);
  StateVector v = random_state(lin, rng);
  SplitR r = lin.split_R(v);
  CHECK(max_abs_diff(r.s_part, v) < 1e-15);
  CHECK(max_abs(r.f_part) == 0.0);

  // |u|^2 u for u = sin(x) e_2 gives (3/4 sin x - 1/4 sin 3x) e_2
  for (int cutoff : {4, 2}) {
    auto bc = testutil::basis(2, cutoff);
    ModelSpec c = default_model(ModelKind::cbf, 2);
    c.darcy = 0;
    c.forchheimer = 1;
    EvolutionOperators cub(c, bc);
    StateVector u = cub.zero_state();
    set_sin(*bc, u.field(0), 1, {1, 0, 0}, 1.0);
    StateVector expect = cub.zero_state();
    set_sin(*bc, expect.field(0), 1, {1, 0, 0}, 0.75);
    if (cutoff >= 3) set_sin(*bc, expect.field(0), 1, {3, 0, 0}, -0.25);
    CHECK(max_abs_diff(cub.apply_R(u), expect) < 1e-14);
  }

  EvolutionOperators trop(default_model(ModelKind::tropical, 2), b);
  StateVector t = random_state(trop, rng);
  t.field(2) *= 0.0;
  leray_project_inplace(*b, t.field(1));
  CHECK(max_abs(trop.apply_R(t)) < 1e-13);
}

TEST_CASE("spectral semigroup and resolvent") {
  auto b = testutil::basis(2, 3);
  ModelSpec s = default_model(ModelKind::boussinesq, 2);
  s.nu = 0.3;
  s.kappa_theta = 2.0;
  EvolutionOperators ops(s, b);
  std::mt19937_64 rng(12);
  StateVector v = random_state(ops, rng);
  const double dt = 0.1;
  StateVector e = ops.exp_A(v, dt);
  StateVector r = ops.resolvent_A(v, dt);
  for (std::size_t i = 0; i < b->size(); ++i) {
    const double lu = 0.3 * b->mu(i), lt = 2.0 * b->mu(i);
    CHECK(std::abs(e.field(0).at(1, i) - std::exp(-lu * dt) * v.field(0).at(1, i)) < 1e-15);
    CHECK(std::abs(e.field(1).at(0, i) - std::exp(-lt * dt) * v.field(1).at(0, i)) < 1e-15);
    CHECK(std::abs(r.field(1).at(0, i) - v.field(1).at(0, i) / (1 + lt * dt)) < 1e-15);
  }
  CHECK(ops.lambda_max(b->full_level()) == doctest::Approx(2.0 * 18));
  CHECK(ops.lambda_min() == doctest::Approx(0.3));
}
