#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spdegal/errors.hpp"
#include "spdegal/spectral.hpp"

using namespace spdegal;

TEST_CASE("enumerate_modes counts and ordering") {
  auto m = enumerate_modes(2, 1);
  REQUIRE(m.size() == 8);
  CHECK(m[0] == Mode{-1, 0, 0});
  CHECK(m[1] == Mode{0, -1, 0});
  CHECK(m[2] == Mode{0, 1, 0});
  CHECK(m[3] == Mode{1, 0, 0});
  CHECK(enumerate_modes(2, 2).size() == 24);
  auto m3 = enumerate_modes(3, 1);
  CHECK(m3.size() == 26);
  int unit = 0;
  for (const auto& k : m3) unit += norm2(k) == 1;
  CHECK(unit == 6);
  CHECK_THROWS_AS(enumerate_modes(4, 1), ConfigError);
  CHECK_THROWS_AS(enumerate_modes(2, 0), ConfigError);
}

TEST_CASE("basis ordering is deterministic and mu non-decreasing") {
  SpectralBasis a(3, 3), b(3, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.mode(i) == b.mode(i));
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.mu(i) >= a.mu(i - 1));
  CHECK(a.mu(0) > 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Mode& k = a.mode(i);
    CHECK(a.mode(a.conjugate(i)) == Mode{-k[0], -k[1], -k[2]});
    CHECK(a.index_of(k) == i);
  }
  CHECK(a.index_of({0, 0, 0}) == SpectralBasis::npos);
  CHECK(a.index_of({4, 0, 0}) == SpectralBasis::npos);
}

TEST_CASE("sobolev seminorm examples") {
  SpectralBasis b(2, 2);
  std::vector<cplx> v(b.size());
  v[b.index_of({1, 0, 0})] = 1.0;
  CHECK(sobolev_seminorm(b, v, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  std::fill(v.begin(), v.end(), 0.0);
  v[b.index_of({1, 1, 0})] = 1.0;
  CHECK(sobolev_seminorm(b, v, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  std::vector<cplx> bad(b.size() + 1);
  CHECK_THROWS_AS(sobolev_seminorm(b, bad, 0.0, 1.0), ShapeError);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (auto& z : v) z = {n01(rng), n01(rng)};
  const double n0 = sobolev_seminorm(b, v, 0.0, 1.0);
  const double nq = sobolev_seminorm(b, v, 0.25, 1.0);
  const double nh = sobolev_seminorm(b, v, 0.5, 1.0);
  CHECK(n0 <= nq);
  CHECK(nq <= nh);
  double sum = 0;
  for (const auto& z : v) sum += std::norm(z);
  CHECK(n0 * n0 == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("Galerkin projections") {
  SpectralBasis b(2, 3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  std::vector<cplx> v(b.size());
  for (auto& z : v) z = {n01(rng), n01(rng)};
  CHECK(project_Pn(b, v, b.full_level()) == v);
  std::vector<cplx> last(b.size());
  last.back() = 1.0;
  auto z = project_Pn(b, last, {1});
  for (const auto& x : z) CHECK(x == cplx{});
  CHECK(project_Pn(b, project_Pn(b, v, {8}), {4}) == project_Pn(b, v, {4}));
  auto p = project_Pn(b, v, {10});
  auto q = project_Qn(b, v, {10});
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(p[i] + q[i] == v[i]);
  CHECK_THROWS_AS(project_Pn(b, v, {0}), ConfigError);
  CHECK_THROWS_AS(project_Pn(b, v, {b.size() + 1}), ConfigError);
}

TEST_CASE("symmetric levels from radii") {
  SpectralBasis b(2, 16);
  for (int r : {2, 4, 8, 16}) {
    auto lv = b.level_for_radius(r);
    CHECK(b.is_symmetric(lv));
    CHECK(b.mu(lv.n - 1) <= r * r);
    if (lv.n < b.size()) CHECK(b.mu(lv.n) > r * r);
  }
  CHECK_FALSE(b.is_symmetric({1}));
}

TEST_CASE("Poincare gap") {
  SpectralBasis b(2, 3);
  std::vector<cplx> v(b.size());
  const std::size_t tail = b.index_of({2, 1, 0});
  v[tail] = 1.0;
  GalerkinLevel lv{b.index_of({1, 1, 0}) + 1};
  // lambda_n = 2 while the populated mode has 5
  auto g = poincare_gap(b, v, lv, 0.0, 0.5, 1.0);
  CHECK(g.lhs == doctest::Approx(1.0));
  CHECK(g.bound == doctest::Approx(std::sqrt(5.0 / 2.0)));
  GalerkinLevel exact{b.index_of({-2, -1, 0}) + 1};
  REQUIRE(b.mu(exact.n - 1) == 5.0);
  auto ge = poincare_gap(b, v, exact, 0.0, 0.5, 1.0);
  CHECK(ge.lhs == doctest::Approx(ge.bound).epsilon(1e-14));

  std::vector<cplx> inside(b.size());
  inside[0] = 1.0;
  auto gz = poincare_gap(b, inside, {4}, 0.0, 1.0, 1.0);
  CHECK(gz.lhs == 0.0);
  CHECK(gz.bound == 0.0);
  CHECK_THROWS_AS(poincare_gap(b, v, lv, 0.5, 0.5, 1.0), ArgumentError);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> ua(-1.0, 2.0);
  std::uniform_int_distribution<std::size_t> un(1, b.size());
  int ok = 0, tested = 0;
  for (int s = 0; s < 10000; ++s) {
    for (auto& z : v) z = {n01(rng), n01(rng)};
    double a1 = ua(rng), a2 = ua(rng);
    if (a1 == a2) continue;
    if (a1 > a2) std::swap(a1, a2);
    auto r = poincare_gap(b, v, {un(rng)}, a1, a2, 0.7);
    ++tested;
    ok += r.lhs <= r.bound * (1 + 1e-12);
  }
  CHECK(tested > 9900);
  CHECK(ok == tested);
}
