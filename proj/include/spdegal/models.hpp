#pragma once

// The six thermo-magneto-fluid systems as (A, B, R = S + F) on the periodic
// torus. Every system is assembled from the same pseudo-spectral kernels; a
// quadratic-cost direct convolution of the bilinear term is kept alongside as
// an independent oracle.

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spdegal/state.hpp"
#include "spdegal/transform.hpp"

namespace spdegal {

enum class ModelKind { cbf, mhd, boussinesq, dynamo, micropolar, tropical };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);  // throws ConfigError

// amplitude * cos(k . x)
struct CosineMode {
  Mode k{};
  double amplitude = 0.0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::cbf;
  int dim = 2;

  // Diffusivities. `nu` is the velocity viscosity (mu for the micropolar
  // system, whose velocity diffusivity is mu + chi).
  double nu = 1.0;
  double kappa = 1.0;        // magnetic field B
  double kappa_theta = 1.0;  // temperature theta
  double nu_v = 1.0;         // baroclinic mode v
  double gamma = 1.0;        // micro-rotation w
  double grad_div = 0.0;     // micropolar alpha + beta

  double chi = 0.5;  // micropolar coupling

  double darcy = 0.0;        // alpha
  double forchheimer = 0.0;  // beta
  double exponent = 3.0;     // r in [2, 3]

  double coriolis = 0.0;  // sigma, forced to zero in 2D

  std::array<double, 3> buoyancy{};      // unit vector e; zero means e_d
  std::vector<CosineMode> background;    // phi; empty means cos(x_d)
};

// Spec with the documented defaults for a model kind: cbf gets alpha = beta =
// 0.5, everything else starts undamped.
ModelSpec default_model(ModelKind kind, int dim);

// All violated invariants, each prefixed with its key.
std::vector<std::string> validation_errors(const ModelSpec& spec);
// Throws ConfigError listing every violation.
void validate(const ModelSpec& spec);

struct FieldLayout {
  std::string name;
  int components = 1;
  bool solenoidal = false;
  FieldScale scale;
};

std::vector<FieldLayout> field_layout(const ModelSpec& spec);

// One quadratic term of B(Phi1, Phi2), written into field `out`:
//   advect:    coef * (Phi1[carrier] . grad) Phi2[operand]
//   div_outer: coef * d_j (Phi1[carrier]_j Phi2[operand]_i)
struct BilinearTerm {
  enum class Form { advect, div_outer };
  Form form = Form::advect;
  std::size_t out = 0;
  std::size_t carrier = 0;
  std::size_t operand = 0;
  double coef = 1.0;
};

std::vector<BilinearTerm> bilinear_terms(const ModelSpec& spec);

struct SplitR {
  StateVector s_part;  // <S(v), v> >= 0
  StateVector f_part;  // |F(v)| <= C (1 + ||v||)
};

class EvolutionOperators {
 public:
  EvolutionOperators(ModelSpec spec, std::shared_ptr<const SpectralBasis> basis);
  // Custom bilinear table, e.g. to build negative controls.
  EvolutionOperators(ModelSpec spec, std::shared_ptr<const SpectralBasis> basis,
                     std::vector<BilinearTerm> terms);

  const ModelSpec& spec() const noexcept { return spec_; }
  const SpectralBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SpectralBasis>& basis_ptr() const noexcept { return basis_; }
  const std::vector<FieldLayout>& layout() const noexcept { return layout_; }
  const std::vector<BilinearTerm>& terms() const noexcept { return terms_; }
  const ScaleSet& scales() const noexcept { return scales_; }
  const Field& background() const noexcept { return phi_; }

  StateVector zero_state() const;
  // Throws TypeError when the roster or basis differs from this model's.
  void require_roster(const StateVector& v, const char* context) const;

  StateVector apply_A(const StateVector& v) const;
  StateVector apply_B(const StateVector& v1, const StateVector& v2) const;
  StateVector apply_R(const StateVector& v) const;
  SplitR split_R(const StateVector& v) const;

  // Direct convolution over mode pairs; no transforms. Bases above
  // kBruteForceModeLimit modes are refused with ResourceError.
  StateVector brute_force_B(const StateVector& v1, const StateVector& v2) const;
  static constexpr std::size_t kBruteForceModeLimit = 256;

  // exp(-A dt) v and (I + A dt)^{-1} v, exact per mode.
  StateVector exp_A(const StateVector& v, double dt) const;
  StateVector resolvent_A(const StateVector& v, double dt) const;

  // Largest eigenvalue of A on the first level.n modes.
  double lambda_max(GalerkinLevel level) const;
  // Smallest eigenvalue of A.
  double lambda_min() const;

  // Norm channels: |v|^2, ||v||^2 = |A^{1/2} v|^2, |A v|^2.
  double h2(const StateVector& v) const { return sobolev2(v, 0.0, scales_); }
  double v2(const StateVector& v) const { return sobolev2(v, 0.5, scales_); }
  double a2(const StateVector& v) const { return sobolev2(v, 1.0, scales_); }

 private:
  template <class Fn>
  StateVector spectral_map(const StateVector& v, Fn&& fn) const;
  void project_solenoidal(StateVector& v) const;

  ModelSpec spec_;
  std::shared_ptr<const SpectralBasis> basis_;
  std::vector<FieldLayout> layout_;
  std::vector<BilinearTerm> terms_;
  ScaleSet scales_;
  Field phi_;
  SpectralGrid quad_grid_;
  SpectralGrid cubic_grid_;
};

}  // namespace spdegal
