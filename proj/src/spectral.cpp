#include "spdegal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spdegal/errors.hpp"

namespace spdegal {

namespace {

std::size_t component_count(const SpectralBasis& basis, std::span<const cplx> v) {
  const std::size_t n = basis.size();
  if (v.empty() || v.size() % n != 0) {
    throw ShapeError("coefficient array of length " + std::to_string(v.size()) +
                     " does not fit a basis of " + std::to_string(n) + " modes");
  }
  return v.size() / n;
}

}  // namespace

std::vector<Mode> enumerate_modes(int dim, int cutoff) {
  if (dim != 2 && dim != 3) {
    throw ConfigError("dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (cutoff < 1) {
    throw ConfigError("cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  std::vector<Mode> modes;
  const int zlo = dim == 3 ? -cutoff : 0;
  const int zhi = dim == 3 ? cutoff : 0;
  for (int a = -cutoff; a <= cutoff; ++a) {
    for (int b = -cutoff; b <= cutoff; ++b) {
      for (int c = zlo; c <= zhi; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        modes.push_back({a, b, c});
      }
    }
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) {
    const int nx = norm2(x);
    const int ny = norm2(y);
    if (nx != ny) return nx < ny;
    return x < y;
  });
  return modes;
}

SpectralBasis::SpectralBasis(int dim, int cutoff)
    : dim_(dim), cutoff_(cutoff), modes_(enumerate_modes(dim, cutoff)) {
  const int side = 2 * cutoff + 1;
  const std::size_t cells = dim == 3 ? std::size_t(side) * side * side : std::size_t(side) * side;
  lattice_.assign(cells, npos);
  mu_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    mu_[i] = static_cast<double>(norm2(modes_[i]));
    const Mode& k = modes_[i];
    std::size_t cell = std::size_t(k[0] + cutoff) * side + std::size_t(k[1] + cutoff);
    if (dim == 3) cell = cell * side + std::size_t(k[2] + cutoff);
    lattice_[cell] = i;
  }
  conj_.resize(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const Mode& k = modes_[i];
    conj_[i] = index_of({-k[0], -k[1], -k[2]});
  }
}

std::size_t SpectralBasis::index_of(const Mode& k) const {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(k[a]) > cutoff_) return npos;
  }
  if (dim_ == 2 && k[2] != 0) return npos;
  const int side = 2 * cutoff_ + 1;
  std::size_t cell = std::size_t(k[0] + cutoff_) * side + std::size_t(k[1] + cutoff_);
  if (dim_ == 3) cell = cell * side + std::size_t(k[2] + cutoff_);
  return lattice_[cell];
}

void SpectralBasis::check_level(GalerkinLevel level) const {
  if (level.n < 1 || level.n > modes_.size()) {
    throw ConfigError("Galerkin level " + std::to_string(level.n) + " outside [1, " +
                      std::to_string(modes_.size()) + "]");
  }
}

bool SpectralBasis::is_symmetric(GalerkinLevel level) const {
  check_level(level);
  for (std::size_t i = 0; i < level.n; ++i) {
    if (conj_[i] >= level.n) return false;
  }
  return true;
}

GalerkinLevel SpectralBasis::level_for_radius(int radius) const {
  const double r2 = static_cast<double>(radius) * radius;
  const auto it = std::upper_bound(mu_.begin(), mu_.end(), r2);
  return {static_cast<std::size_t>(it - mu_.begin())};
}

double sobolev_seminorm(const SpectralBasis& basis, std::span<const cplx> v, double alpha,
                        double diffusivity) {
  const std::size_t comps = component_count(basis, v);
  const std::size_t n = basis.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = alpha == 0.0 ? 1.0 : std::pow(diffusivity * basis.mu(i), 2.0 * alpha);
    double mag = 0.0;
    for (std::size_t c = 0; c < comps; ++c) mag += std::norm(v[c * n + i]);
    sum += w * mag;
  }
  return std::sqrt(sum);
}

std::vector<cplx> project_Pn(const SpectralBasis& basis, std::span<const cplx> v,
                             GalerkinLevel level) {
  basis.check_level(level);
  const std::size_t comps = component_count(basis, v);
  const std::size_t n = basis.size();
  std::vector<cplx> out(v.begin(), v.end());
  for (std::size_t c = 0; c < comps; ++c) {
    std::fill(out.begin() + c * n + level.n, out.begin() + (c + 1) * n, cplx{});
  }
  return out;
}

std::vector<cplx> project_Qn(const SpectralBasis& basis, std::span<const cplx> v,
                             GalerkinLevel level) {
  basis.check_level(level);
  const std::size_t comps = component_count(basis, v);
  const std::size_t n = basis.size();
  std::vector<cplx> out(v.begin(), v.end());
  for (std::size_t c = 0; c < comps; ++c) {
    std::fill(out.begin() + c * n, out.begin() + c * n + level.n, cplx{});
  }
  return out;
}

PoincareGap poincare_gap(const SpectralBasis& basis, std::span<const cplx> v,
                         GalerkinLevel level, double a1, double a2, double diffusivity) {
  if (!(a1 < a2)) throw ArgumentError("poincare_gap requires a1 < a2");
  const auto tail = project_Qn(basis, v, level);
  const double lambda_n = diffusivity * basis.mu(level.n - 1);
  PoincareGap gap;
  gap.lhs = sobolev_seminorm(basis, tail, a1, diffusivity);
  gap.bound = std::pow(lambda_n, a1 - a2) * sobolev_seminorm(basis, tail, a2, diffusivity);
  return gap;
}

}  // namespace spdegal
