#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "spdegal/models.hpp"
#include "spdegal/state.hpp"

namespace testutil {

using namespace spdegal;

inline std::shared_ptr<const SpectralBasis> basis(int dim, int cutoff) {
  return std::make_shared<const SpectralBasis>(dim, cutoff);
}

// Hermitian random field; solenoidal fields are Leray-projected. Only modes
// with |k|^2 <= max_mu are populated when max_mu > 0.
inline void fill_random(const SpectralBasis& b, Field& f, std::mt19937_64& rng, double max_mu = 0) {
  std::normal_distribution<double> n01;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t j = b.conjugate(i);
    if (j < i) continue;
    for (int c = 0; c < f.components(); ++c) {
      cplx z{n01(rng), n01(rng)};
      if (max_mu > 0 && b.mu(i) > max_mu) z = 0;
      if (i == j) z = z.real();
      f.at(c, i) = z;
      f.at(c, j) = std::conj(z);
    }
  }
  if (f.solenoidal()) leray_project_inplace(b, f);
}

inline StateVector random_state(const EvolutionOperators& ops, std::mt19937_64& rng,
                                double max_mu = 0) {
  StateVector v = ops.zero_state();
  for (std::size_t f = 0; f < v.field_count(); ++f) fill_random(ops.basis(), v.field(f), rng, max_mu);
  return v;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  double m = 0;
  for (std::size_t f = 0; f < a.field_count(); ++f) {
    const auto& x = a.field(f).data();
    const auto& y = b.field(f).data();
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

inline double max_abs(const StateVector& a) {
  double m = 0;
  for (std::size_t f = 0; f < a.field_count(); ++f) {
    for (const auto& z : a.field(f).data()) m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace testutil
