#pragma once

// Padded collocation transforms between Fourier coefficients and grid values.
//
// The grid has n points per axis at x_j = 2 pi j / n, with n the smallest even
// integer >= pad * (2 * cutoff + 1). Truncating a product back onto the basis
// is the dealiasing step: pad 3/2 is exact for quadratic products of fields in
// the basis box, pad 2 for cubic ones.

#include <memory>
#include <span>
#include <vector>

#include "spdegal/state.hpp"

namespace spdegal {

enum class Pad { one, three_halves, two };

int grid_size(int cutoff, Pad pad);

struct PhysicalField {
  int dim = 0;
  int points_per_axis = 0;
  int components = 0;
  std::vector<double> values;  // component-major, row-major grid per component

  std::size_t points() const;
  std::span<double> component(int c) { return {values.data() + c * points(), points()}; }
  std::span<const double> component(int c) const {
    return {values.data() + c * points(), points()};
  }
};

// Transform engine bound to one basis and padding. Plans are shared and
// immutable; every call uses its own buffers, so one grid can be used from
// several threads at once.
class SpectralGrid {
 public:
  SpectralGrid(std::shared_ptr<const SpectralBasis> basis, Pad pad);

  const SpectralBasis& basis() const { return *basis_; }
  Pad pad() const noexcept { return pad_; }
  int points_per_axis() const noexcept { return n_; }
  std::size_t points() const noexcept { return points_; }

  // Grid values of one coefficient block. When `imag_residue` is non-null it
  // receives the largest discarded imaginary part.
  std::vector<double> to_physical(std::span<const cplx> coeffs,
                                  double* imag_residue = nullptr) const;
  // Coefficients of one grid component, truncated to the basis.
  std::vector<cplx> to_spectral(std::span<const double> values) const;

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  Pad pad_;
  int n_;
  std::size_t points_;
  std::vector<std::size_t> grid_index_;
  void* forward_ = nullptr;   // fftw_plan, owned by a process-wide cache
  void* backward_ = nullptr;
};

// Throws StateIntegrityError when the field is not real-valued, i.e. the
// imaginary residue exceeds 1e-12 of the coefficient magnitude.
PhysicalField to_physical(const std::shared_ptr<const SpectralBasis>& basis, const Field& f,
                          Pad pad);
// Throws ShapeError when the grid does not match (basis, pad).
Field to_spectral(const PhysicalField& values, const std::shared_ptr<const SpectralBasis>& basis,
                  Pad pad, bool solenoidal = false);

}  // namespace spdegal
