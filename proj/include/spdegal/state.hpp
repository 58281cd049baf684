#pragma once

// State vectors as named fields in truncated Fourier representation.
//
// Coefficients are stored on the full lattice (both k and -k) in component-major
// blocks: component c of mode i lives at c * basis.size() + i. A real physical
// field satisfies coeff(-k) = conj(coeff(k)).

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spdegal/spectral.hpp"

namespace spdegal {

class Field {
 public:
  Field() = default;
  Field(std::size_t modes, int components, bool solenoidal);

  int components() const noexcept { return components_; }
  std::size_t modes() const noexcept { return modes_; }
  bool solenoidal() const noexcept { return solenoidal_; }

  std::span<cplx> component(int c) { return {data_.data() + c * modes_, modes_}; }
  std::span<const cplx> component(int c) const { return {data_.data() + c * modes_, modes_}; }
  cplx& at(int c, std::size_t i) { return data_[c * modes_ + i]; }
  const cplx& at(int c, std::size_t i) const { return data_[c * modes_ + i]; }

  std::vector<cplx>& data() noexcept { return data_; }
  const std::vector<cplx>& data() const noexcept { return data_; }

  bool same_shape(const Field& other) const {
    return components_ == other.components_ && modes_ == other.modes_;
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  // this += s * other
  void axpy(double s, const Field& other);

 private:
  std::size_t modes_ = 0;
  int components_ = 0;
  bool solenoidal_ = false;
  std::vector<cplx> data_;
};

// Per-field scaling of the base Laplacian: the dissipative operator acts on the
// transverse part of a mode with nu * mu and on the longitudinal part (along k)
// with (nu + nu_long) * mu.
struct FieldScale {
  double nu = 1.0;
  double nu_long = 0.0;
};
using ScaleSet = std::vector<FieldScale>;

class StateVector {
 public:
  struct Entry {
    std::string name;
    Field field;
  };

  StateVector() = default;
  explicit StateVector(std::shared_ptr<const SpectralBasis> basis) : basis_(std::move(basis)) {}

  const SpectralBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SpectralBasis>& basis_ptr() const noexcept { return basis_; }

  Field& add_field(std::string name, int components, bool solenoidal);

  std::size_t field_count() const noexcept { return entries_.size(); }
  const std::string& name(std::size_t i) const { return entries_[i].name; }
  Field& field(std::size_t i) { return entries_[i].field; }
  const Field& field(std::size_t i) const { return entries_[i].field; }
  Field& field(const std::string& name);
  const Field& field(const std::string& name) const;
  bool has_field(const std::string& name) const;
  std::vector<std::string> roster() const;

  // Same basis and same (name, components) sequence.
  bool compatible(const StateVector& other) const;
  // Throws TypeError when not compatible.
  void require_compatible(const StateVector& other, const char* context) const;

  StateVector zeros_like() const;
  bool all_finite() const;
  void set_zero();

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(double s);
  void axpy(double s, const StateVector& other);

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(double s, StateVector a) { return a *= s; }

  // Bitwise equality of coefficients.
  friend bool operator==(const StateVector& a, const StateVector& b);

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Structural checks.

// Largest |coeff(-k) - conj(coeff(k))| over the field.
double hermitian_defect(const SpectralBasis& basis, const Field& f);
// Largest |sum_i k_i coeff_i(k)| / |k| over the field (vector fields only).
double divergence_defect(const SpectralBasis& basis, const Field& f);
// Throws StateIntegrityError if a solenoidal field violates div = 0 beyond
// 1e-12 of its largest coefficient magnitude.
void require_solenoidal(const SpectralBasis& basis, const Field& f, const std::string& name);

// ---------------------------------------------------------------------------
// Spectral operators.

// Per-mode I - k k^T / |k|^2. Throws TypeError on scalar input.
Field leray_project(const SpectralBasis& basis, const Field& f);
void leray_project_inplace(const SpectralBasis& basis, Field& f);

enum class DiffKind { gradient, divergence, curl, laplacian };

// Exact spectral differentiation. curl maps vector->vector in 3D and, in 2D,
// vector->scalar (du_y/dx - du_x/dy) or scalar->vector (dw/dy, -dw/dx).
Field differential(const SpectralBasis& basis, const Field& f, DiffKind kind);

// sum over fields and modes of Re(conj(A^alpha a) . A^alpha b) with A scaled
// per field by `scales`. The unweighted variant uses nu = 1 for every field.
double inner_product(const StateVector& a, const StateVector& b, double alpha,
                     const ScaleSet& scales);
double inner_product(const StateVector& a, const StateVector& b, double alpha = 0.0);

// |A^alpha v|^2 for one field.
double field_sobolev2(const SpectralBasis& basis, const Field& f, double alpha,
                      const FieldScale& scale);
// |A^alpha v|^2 summed over fields.
double sobolev2(const StateVector& v, double alpha, const ScaleSet& scales);

// Per-field H energies |v_i|^2.
std::vector<double> field_energies(const StateVector& v);

// Galerkin projections applied to every field.
StateVector project_Pn(const StateVector& v, GalerkinLevel level);
void project_Pn_inplace(StateVector& v, GalerkinLevel level);

}  // namespace spdegal
