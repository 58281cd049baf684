#pragma once

// Fourier mode bookkeeping on the torus [0, 2pi)^d.
//
// Modes exclude k = 0 and are ordered by (|k|^2, lexicographic k). That order
// defines the nested Galerkin spaces H_1 c H_2 c ... used by P_n and Q_n.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spdegal {

using cplx = std::complex<double>;

// Integer wavevector; entries beyond the basis dimension are zero.
using Mode = std::array<int, 3>;

inline int norm2(const Mode& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

// Number of retained modes per scalar component.
struct GalerkinLevel {
  std::size_t n = 0;
  friend bool operator==(GalerkinLevel, GalerkinLevel) = default;
};

// All nonzero k with |k_i| <= cutoff, sorted by (|k|^2, lexicographic k).
std::vector<Mode> enumerate_modes(int dim, int cutoff);

class SpectralBasis {
 public:
  SpectralBasis(int dim, int cutoff);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return modes_.size(); }

  const Mode& mode(std::size_t i) const { return modes_[i]; }
  std::span<const Mode> modes() const noexcept { return modes_; }

  // Base Laplacian eigenvalue |k|^2 (diffusivity-free).
  double mu(std::size_t i) const { return mu_[i]; }
  std::span<const double> mus() const noexcept { return mu_; }

  // Index of -k for the mode at index i.
  std::size_t conjugate(std::size_t i) const { return conj_[i]; }

  // Index of k in the basis, or npos if k is zero or outside the box.
  std::size_t index_of(const Mode& k) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  GalerkinLevel full_level() const noexcept { return {modes_.size()}; }

  // Throws ConfigError unless 1 <= level.n <= size().
  void check_level(GalerkinLevel level) const;

  // True when the first n modes are closed under k -> -k, so P_n maps real
  // fields to real fields.
  bool is_symmetric(GalerkinLevel level) const;

  // Largest prefix contained in the ball |k| <= radius.
  GalerkinLevel level_for_radius(int radius) const;

  friend bool operator==(const SpectralBasis& a, const SpectralBasis& b) {
    return a.dim_ == b.dim_ && a.cutoff_ == b.cutoff_;
  }

 private:
  int dim_;
  int cutoff_;
  std::vector<Mode> modes_;
  std::vector<double> mu_;
  std::vector<std::size_t> conj_;
  std::vector<std::size_t> lattice_;  // (2c+1)^d box -> mode index or npos
};

// (sum_k (nu mu_k)^{2 alpha} |v_k|^2)^{1/2} over every component block of v.
// The array length must be a positive multiple of the basis size.
double sobolev_seminorm(const SpectralBasis& basis, std::span<const cplx> v, double alpha,
                        double diffusivity);

std::vector<cplx> project_Pn(const SpectralBasis& basis, std::span<const cplx> v,
                             GalerkinLevel level);
std::vector<cplx> project_Qn(const SpectralBasis& basis, std::span<const cplx> v,
                             GalerkinLevel level);

struct PoincareGap {
  double lhs = 0.0;    // |Q_n v|_{a1}
  double bound = 0.0;  // lambda_n^{a1 - a2} |Q_n v|_{a2}
};

// Tail Poincare inequality with lambda_n = diffusivity * mu of the n-th mode.
PoincareGap poincare_gap(const SpectralBasis& basis, std::span<const cplx> v,
                         GalerkinLevel level, double a1, double a2, double diffusivity);

}  // namespace spdegal
