#include "spdegal/models.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "spdegal/errors.hpp"

namespace spdegal {

namespace {

constexpr cplx I{0.0, 1.0};

std::string fmt_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::array<double, 3> unit_axis(int axis) {
  std::array<double, 3> e{};
  e[static_cast<std::size_t>(axis)] = 1.0;
  return e;
}

std::array<double, 3> effective_buoyancy(const ModelSpec& spec) {
  const auto& e = spec.buoyancy;
  if (e[0] == 0.0 && e[1] == 0.0 && e[2] == 0.0) return unit_axis(spec.dim - 1);
  return e;
}

std::vector<CosineMode> effective_background(const ModelSpec& spec) {
  if (!spec.background.empty()) return spec.background;
  Mode k{};
  k[static_cast<std::size_t>(spec.dim - 1)] = 1;
  return {{k, 1.0}};
}

bool has_damping(ModelKind kind) {
  return kind == ModelKind::cbf || kind == ModelKind::mhd || kind == ModelKind::boussinesq;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::cbf: return "cbf";
    case ModelKind::mhd: return "mhd";
    case ModelKind::boussinesq: return "boussinesq";
    case ModelKind::dynamo: return "dynamo";
    case ModelKind::micropolar: return "micropolar";
    case ModelKind::tropical: return "tropical";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto k : {ModelKind::cbf, ModelKind::mhd, ModelKind::boussinesq, ModelKind::dynamo,
                 ModelKind::micropolar, ModelKind::tropical}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

ModelSpec default_model(ModelKind kind, int dim) {
  ModelSpec spec;
  spec.kind = kind;
  spec.dim = dim;
  if (kind == ModelKind::cbf) {
    spec.darcy = 0.5;
    spec.forchheimer = 0.5;
  }
  if (kind == ModelKind::micropolar) spec.grad_div = 0.5;
  return spec;
}

std::vector<std::string> validation_errors(const ModelSpec& spec) {
  std::vector<std::string> errs;
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      errs.push_back(std::string("model.") + key + ": must be positive, got " + fmt_double(v));
    }
  };
  if (spec.dim != 2 && spec.dim != 3) {
    errs.push_back("model.dimension: must be 2 or 3, got " + std::to_string(spec.dim));
    return errs;
  }
  const ModelKind kind = spec.kind;
  positive("nu", spec.nu);
  if (kind == ModelKind::mhd || kind == ModelKind::dynamo || kind == ModelKind::micropolar) {
    positive("kappa", spec.kappa);
  }
  if (kind == ModelKind::boussinesq || kind == ModelKind::dynamo || kind == ModelKind::tropical) {
    positive("kappa_theta", spec.kappa_theta);
  }
  if (kind == ModelKind::tropical) positive("nu_v", spec.nu_v);
  if (kind == ModelKind::micropolar) {
    positive("chi", spec.chi);
    positive("gamma", spec.gamma);
    if (!(spec.gamma + spec.grad_div > 0.0)) {
      errs.push_back("model.grad_div: alpha + beta + gamma must be positive");
    }
  }
  if (!(spec.darcy >= 0.0)) errs.push_back("model.darcy: must be >= 0");
  if (!(spec.forchheimer >= 0.0)) errs.push_back("model.forchheimer: must be >= 0");
  if (!(spec.exponent >= 2.0 && spec.exponent <= 3.0)) {
    errs.push_back("model.exponent: r = " + fmt_double(spec.exponent) +
                   " violates r ∈ [2,3]");
  }
  if (!has_damping(kind) && (spec.darcy != 0.0 || spec.forchheimer != 0.0)) {
    errs.push_back("model.darcy/forchheimer: damping applies to cbf, mhd and boussinesq only");
  }
  if (spec.coriolis != 0.0) {
    if (spec.dim == 2) {
      errs.push_back("model.coriolis: sigma = " + fmt_double(spec.coriolis) +
                     " given, but the rotation term is one which is zero when d=2");
    } else if (kind != ModelKind::dynamo) {
      errs.push_back("model.coriolis: only the dynamo model has a Coriolis term");
    }
  }
  const auto& e = spec.buoyancy;
  if (e[0] != 0.0 || e[1] != 0.0 || e[2] != 0.0) {
    const double len = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (std::abs(len - 1.0) > 1e-12) errs.push_back("model.buoyancy: must be a unit vector");
    if (spec.dim == 2 && e[2] != 0.0) errs.push_back("model.buoyancy: third entry must be 0 in 2D");
  }
  for (const auto& m : spec.background) {
    if (m.k[0] == 0 && m.k[1] == 0 && m.k[2] == 0) {
      errs.push_back("model.background: zero wavevector is excluded (mean-zero fields)");
    }
    if (spec.dim == 2 && m.k[2] != 0) {
      errs.push_back("model.background: third wavevector entry must be 0 in 2D");
    }
  }
  return errs;
}

void validate(const ModelSpec& spec) {
  const auto errs = validation_errors(spec);
  if (errs.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw ConfigError(msg);
}

std::vector<FieldLayout> field_layout(const ModelSpec& spec) {
  const int d = spec.dim;
  std::vector<FieldLayout> out;
  switch (spec.kind) {
    case ModelKind::cbf:
      out.push_back({"u", d, true, {spec.nu, 0.0}});
      break;
    case ModelKind::mhd:
      out.push_back({"u", d, true, {spec.nu, 0.0}});
      out.push_back({"B", d, true, {spec.kappa, 0.0}});
      break;
    case ModelKind::boussinesq:
      out.push_back({"u", d, true, {spec.nu, 0.0}});
      out.push_back({"theta", 1, false, {spec.kappa_theta, 0.0}});
      break;
    case ModelKind::dynamo:
      out.push_back({"u", d, true, {spec.nu, 0.0}});
      out.push_back({"B", d, true, {spec.kappa, 0.0}});
      out.push_back({"theta", 1, false, {spec.kappa_theta, 0.0}});
      break;
    case ModelKind::micropolar:
      out.push_back({"u", d, true, {spec.nu + spec.chi, 0.0}});
      if (d == 3) {
        out.push_back({"w", 3, false, {spec.gamma, spec.grad_div}});
      } else {
        out.push_back({"w", 1, false, {spec.gamma, 0.0}});
      }
      out.push_back({"B", d, true, {spec.kappa, 0.0}});
      break;
    case ModelKind::tropical:
      out.push_back({"u", d, true, {spec.nu, 0.0}});
      out.push_back({"v", d, false, {spec.nu_v, 0.0}});
      out.push_back({"theta", 1, false, {spec.kappa_theta, 0.0}});
      break;
  }
  return out;
}

std::vector<BilinearTerm> bilinear_terms(const ModelSpec& spec) {
  using F = BilinearTerm::Form;
  switch (spec.kind) {
    case ModelKind::cbf:
      return {{F::advect, 0, 0, 0, 1.0}};
    case ModelKind::mhd:
      return {{F::advect, 0, 0, 0, 1.0},
              {F::advect, 0, 1, 1, -1.0},
              {F::advect, 1, 0, 1, 1.0},
              {F::advect, 1, 1, 0, -1.0}};
    case ModelKind::boussinesq:
      return {{F::advect, 0, 0, 0, 1.0}, {F::advect, 1, 0, 1, 1.0}};
    case ModelKind::dynamo:
      return {{F::advect, 0, 0, 0, 1.0},
              {F::advect, 0, 1, 1, -1.0},
              {F::advect, 1, 0, 1, 1.0},
              {F::advect, 1, 1, 0, -1.0},
              {F::advect, 2, 0, 2, 1.0}};
    case ModelKind::micropolar:
      // roster (u, w, B)
      return {{F::advect, 0, 0, 0, 1.0},
              {F::advect, 0, 2, 2, -1.0},
              {F::advect, 1, 0, 1, 1.0},
              {F::advect, 2, 0, 2, 1.0},
              {F::advect, 2, 2, 0, -1.0}};
    case ModelKind::tropical:
      // roster (u, v, theta)
      return {{F::advect, 0, 0, 0, 1.0},
              {F::div_outer, 0, 1, 1, 1.0},
              {F::advect, 1, 0, 1, 1.0},
              {F::advect, 1, 1, 0, 1.0},
              {F::advect, 2, 0, 2, 1.0}};
  }
  return {};
}

// ---------------------------------------------------------------------------

EvolutionOperators::EvolutionOperators(ModelSpec spec, std::shared_ptr<const SpectralBasis> basis)
    : EvolutionOperators(spec, basis, bilinear_terms(spec)) {}

EvolutionOperators::EvolutionOperators(ModelSpec spec, std::shared_ptr<const SpectralBasis> basis,
                                       std::vector<BilinearTerm> terms)
    : spec_(std::move(spec)),
      basis_(std::move(basis)),
      layout_(field_layout(spec_)),
      terms_(std::move(terms)),
      quad_grid_(basis_, Pad::three_halves),
      cubic_grid_(basis_, Pad::two) {
  validate(spec_);
  if (basis_->dim() != spec_.dim) {
    throw ConfigError("model dimension " + std::to_string(spec_.dim) +
                      " does not match basis dimension " + std::to_string(basis_->dim()));
  }
  for (const auto& t : terms_) {
    const std::size_t nf = layout_.size();
    if (t.out >= nf || t.carrier >= nf || t.operand >= nf) {
      throw ConfigError("bilinear term refers to a field outside the roster");
    }
    if (layout_[t.carrier].components != spec_.dim) {
      throw ConfigError("bilinear term carrier must be a vector field");
    }
    if (layout_[t.out].components != layout_[t.operand].components) {
      throw ConfigError("bilinear term output and operand shapes differ");
    }
  }
  for (const auto& l : layout_) scales_.push_back(l.scale);
  if (spec_.kind == ModelKind::dynamo && spec_.dim == 2) spec_.coriolis = 0.0;

  phi_ = Field(basis_->size(), 1, false);
  if (spec_.kind == ModelKind::boussinesq) {
    for (const auto& m : effective_background(spec_)) {
      const std::size_t i = basis_->index_of(m.k);
      const std::size_t j = basis_->index_of({-m.k[0], -m.k[1], -m.k[2]});
      if (i == SpectralBasis::npos || j == SpectralBasis::npos) {
        throw ConfigError("model.background: mode outside the basis");
      }
      phi_.at(0, i) += 0.5 * m.amplitude;
      phi_.at(0, j) += 0.5 * m.amplitude;
    }
  }
}

StateVector EvolutionOperators::zero_state() const {
  StateVector v(basis_);
  for (const auto& l : layout_) v.add_field(l.name, l.components, l.solenoidal);
  return v;
}

void EvolutionOperators::require_roster(const StateVector& v, const char* context) const {
  bool ok = v.basis_ptr() && v.basis() == *basis_ && v.field_count() == layout_.size();
  for (std::size_t f = 0; ok && f < layout_.size(); ++f) {
    ok = v.name(f) == layout_[f].name && v.field(f).components() == layout_[f].components;
  }
  if (!ok) {
    throw TypeError(std::string(context) + ": state roster does not match the " +
                    std::string(to_string(spec_.kind)) + " model");
  }
}

void EvolutionOperators::project_solenoidal(StateVector& v) const {
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    if (layout_[f].solenoidal) leray_project_inplace(*basis_, v.field(f));
  }
}

// fn(lambda) applied to the transverse and longitudinal parts of every mode.
template <class Fn>
StateVector EvolutionOperators::spectral_map(const StateVector& v, Fn&& fn) const {
  require_roster(v, "spectral operator");
  StateVector out = v;
  const std::size_t n = basis_->size();
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    Field& x = out.field(f);
    const FieldScale& s = scales_[f];
    const int comps = x.components();
    const bool longitudinal = comps > 1 && s.nu_long != 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = basis_->mu(i);
      const double ft = fn(s.nu * mu);
      if (!longitudinal) {
        for (int c = 0; c < comps; ++c) x.at(c, i) *= ft;
        continue;
      }
      const double fl = fn((s.nu + s.nu_long) * mu);
      const Mode& k = basis_->mode(i);
      cplx dot{};
      for (int c = 0; c < comps; ++c) dot += static_cast<double>(k[c]) * x.at(c, i);
      const cplx along = dot / mu;
      for (int c = 0; c < comps; ++c) {
        const cplx par = static_cast<double>(k[c]) * along;
        x.at(c, i) = ft * (x.at(c, i) - par) + fl * par;
      }
    }
  }
  return out;
}

StateVector EvolutionOperators::apply_A(const StateVector& v) const {
  return spectral_map(v, [](double lambda) { return lambda; });
}

StateVector EvolutionOperators::exp_A(const StateVector& v, double dt) const {
  return spectral_map(v, [dt](double lambda) { return std::exp(-lambda * dt); });
}

StateVector EvolutionOperators::resolvent_A(const StateVector& v, double dt) const {
  return spectral_map(v, [dt](double lambda) { return 1.0 / (1.0 + lambda * dt); });
}

double EvolutionOperators::lambda_max(GalerkinLevel level) const {
  basis_->check_level(level);
  double mu = 0.0;
  for (std::size_t i = 0; i < level.n; ++i) mu = std::max(mu, basis_->mu(i));
  double best = 0.0;
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    double nu = scales_[f].nu;
    if (layout_[f].components > 1) nu = std::max(nu, scales_[f].nu + scales_[f].nu_long);
    best = std::max(best, nu * mu);
  }
  return best;
}

double EvolutionOperators::lambda_min() const {
  double best = std::numeric_limits<double>::infinity();
  const double mu = basis_->mu(0);
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    double nu = scales_[f].nu;
    if (layout_[f].components > 1) nu = std::min(nu, scales_[f].nu + scales_[f].nu_long);
    best = std::min(best, nu * mu);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Pseudo-spectral bilinear term

namespace {

// Grid values of fields and their first derivatives, computed on demand.
class PhysicalCache {
 public:
  explicit PhysicalCache(const SpectralGrid& grid) : grid_(grid) {}

  // axis < 0 gives the value, otherwise d/dx_axis.
  const std::vector<double>& get(const StateVector& v, int slot, std::size_t field, int comp,
                                 int axis) {
    const std::array<int, 4> key{slot, static_cast<int>(field), comp, axis};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Field& f = v.field(field);
    std::vector<double> vals;
    if (axis < 0) {
      vals = grid_.to_physical(f.component(comp));
    } else {
      const SpectralBasis& basis = grid_.basis();
      std::vector<cplx> deriv(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        deriv[i] = I * static_cast<double>(basis.mode(i)[static_cast<std::size_t>(axis)]) *
                   f.at(comp, i);
      }
      vals = grid_.to_physical(deriv);
    }
    return cache_.emplace(key, std::move(vals)).first->second;
  }

 private:
  const SpectralGrid& grid_;
  std::map<std::array<int, 4>, std::vector<double>> cache_;
};

}  // namespace

StateVector EvolutionOperators::apply_B(const StateVector& v1, const StateVector& v2) const {
  require_roster(v1, "apply_B");
  require_roster(v2, "apply_B");
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    require_solenoidal(*basis_, v1.field(f), v1.name(f));
    if (&v1 != &v2) require_solenoidal(*basis_, v2.field(f), v2.name(f));
  }
  const int d = spec_.dim;
  const std::size_t pts = quad_grid_.points();
  const std::size_t n = basis_->size();
  const int slot2 = &v1 == &v2 ? 0 : 1;

  PhysicalCache cache(quad_grid_);
  // Physical accumulators for advective terms, per (out field, component).
  std::map<std::pair<std::size_t, int>, std::vector<double>> phys_acc;
  StateVector out = zero_state();

  for (const auto& t : terms_) {
    const int comps = layout_[t.operand].components;
    for (int c = 0; c < comps; ++c) {
      if (t.form == BilinearTerm::Form::advect) {
        auto& acc = phys_acc[{t.out, c}];
        if (acc.empty()) acc.assign(pts, 0.0);
        for (int j = 0; j < d; ++j) {
          const auto& a = cache.get(v1, 0, t.carrier, j, -1);
          const auto& db = cache.get(v2, slot2, t.operand, c, j);
          for (std::size_t p = 0; p < pts; ++p) acc[p] += t.coef * a[p] * db[p];
        }
      } else {
        std::vector<cplx> spec_acc(n);
        for (int j = 0; j < d; ++j) {
          const auto& a = cache.get(v1, 0, t.carrier, j, -1);
          const auto& b = cache.get(v2, slot2, t.operand, c, -1);
          std::vector<double> prod(pts);
          for (std::size_t p = 0; p < pts; ++p) prod[p] = a[p] * b[p];
          const auto hat = quad_grid_.to_spectral(prod);
          for (std::size_t i = 0; i < n; ++i) {
            spec_acc[i] += I * static_cast<double>(basis_->mode(i)[static_cast<std::size_t>(j)]) *
                           hat[i];
          }
        }
        Field& o = out.field(t.out);
        for (std::size_t i = 0; i < n; ++i) o.at(c, i) += t.coef * spec_acc[i];
      }
    }
  }
  for (auto& [key, acc] : phys_acc) {
    const auto hat = quad_grid_.to_spectral(acc);
    Field& o = out.field(key.first);
    for (std::size_t i = 0; i < n; ++i) o.at(key.second, i) += hat[i];
  }
  project_solenoidal(out);
  return out;
}

StateVector EvolutionOperators::brute_force_B(const StateVector& v1, const StateVector& v2) const {
  require_roster(v1, "brute_force_B");
  require_roster(v2, "brute_force_B");
  const std::size_t n = basis_->size();
  if (n > kBruteForceModeLimit) {
    throw ResourceError("brute_force_B: basis of " + std::to_string(n) +
                        " modes exceeds the limit of " + std::to_string(kBruteForceModeLimit));
  }
  const int d = spec_.dim;
  StateVector out = zero_state();
  for (const auto& t : terms_) {
    const Field& a = v1.field(t.carrier);
    const Field& b = v2.field(t.operand);
    Field& o = out.field(t.out);
    const int comps = b.components();
    for (std::size_t p = 0; p < n; ++p) {
      const Mode& kp = basis_->mode(p);
      for (std::size_t q = 0; q < n; ++q) {
        const Mode& kq = basis_->mode(q);
        const Mode ks{kp[0] + kq[0], kp[1] + kq[1], kp[2] + kq[2]};
        const std::size_t s = basis_->index_of(ks);
        if (s == SpectralBasis::npos) continue;
        for (int c = 0; c < comps; ++c) {
          cplx acc{};
          if (t.form == BilinearTerm::Form::advect) {
            // (a . grad) b: a_j(p) * i q_j b(q)
            for (int j = 0; j < d; ++j) acc += a.at(j, p) * (I * double(kq[j])) * b.at(c, q);
          } else {
            // d_j (a_j b): i (p + q)_j a_j(p) b(q)
            for (int j = 0; j < d; ++j) acc += (I * double(ks[j])) * a.at(j, p) * b.at(c, q);
          }
          o.at(c, s) += t.coef * acc;
        }
      }
    }
  }
  project_solenoidal(out);
  return out;
}

// ---------------------------------------------------------------------------
// Reactive terms

SplitR EvolutionOperators::split_R(const StateVector& v) const {
  require_roster(v, "split_R");
  const int d = spec_.dim;
  const std::size_t n = basis_->size();
  SplitR r{zero_state(), zero_state()};

  if (has_damping(spec_.kind) && (spec_.darcy != 0.0 || spec_.forchheimer != 0.0)) {
    const Field& u = v.field(0);
    Field& s = r.s_part.field(0);
    s.axpy(spec_.darcy, u);
    if (spec_.forchheimer != 0.0) {
      std::vector<std::vector<double>> up;
      for (int c = 0; c < d; ++c) up.push_back(cubic_grid_.to_physical(u.component(c)));
      const std::size_t pts = cubic_grid_.points();
      std::vector<double> factor(pts);
      const bool cubic = spec_.exponent == 3.0;
      for (std::size_t p = 0; p < pts; ++p) {
        double m2 = 0.0;
        for (int c = 0; c < d; ++c) m2 += up[c][p] * up[c][p];
        factor[p] = cubic ? m2 : std::pow(m2, 0.5 * (spec_.exponent - 1.0));
      }
      for (int c = 0; c < d; ++c) {
        std::vector<double> prod(pts);
        for (std::size_t p = 0; p < pts; ++p) prod[p] = factor[p] * up[c][p];
        const auto hat = cubic_grid_.to_spectral(prod);
        for (std::size_t i = 0; i < n; ++i) s.at(c, i) += spec_.forchheimer * hat[i];
      }
    }
  }

  switch (spec_.kind) {
    case ModelKind::cbf:
    case ModelKind::mhd:
      break;
    case ModelKind::boussinesq: {
      const auto e = effective_buoyancy(spec_);
      const Field& theta = v.field(1);
      Field& fu = r.f_part.field(0);
      for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) fu.at(c, i) += e[c] * theta.at(0, i);
      }
      // (u . grad) phi
      const Field& u = v.field(0);
      const std::size_t pts = quad_grid_.points();
      std::vector<double> acc(pts, 0.0);
      for (int j = 0; j < d; ++j) {
        std::vector<cplx> dphi(n);
        for (std::size_t i = 0; i < n; ++i) dphi[i] = I * double(basis_->mode(i)[j]) * phi_.at(0, i);
        const auto gp = quad_grid_.to_physical(dphi);
        const auto uj = quad_grid_.to_physical(u.component(j));
        for (std::size_t p = 0; p < pts; ++p) acc[p] += uj[p] * gp[p];
      }
      const auto hat = quad_grid_.to_spectral(acc);
      Field& ft = r.f_part.field(1);
      for (std::size_t i = 0; i < n; ++i) ft.at(0, i) += hat[i];
      break;
    }
    case ModelKind::dynamo: {
      const Field& u = v.field(0);
      const Field& theta = v.field(2);
      if (d == 3 && spec_.coriolis != 0.0) {
        // sigma e_3 x u = sigma (-u_y, u_x, 0)
        Field& su = r.s_part.field(0);
        for (std::size_t i = 0; i < n; ++i) {
          su.at(0, i) += -spec_.coriolis * u.at(1, i);
          su.at(1, i) += spec_.coriolis * u.at(0, i);
        }
      }
      Field& fu = r.f_part.field(0);
      Field& ft = r.f_part.field(2);
      for (std::size_t i = 0; i < n; ++i) {
        fu.at(d - 1, i) += theta.at(0, i);
        ft.at(0, i) += u.at(d - 1, i);
      }
      break;
    }
    case ModelKind::micropolar: {
      const Field& u = v.field(0);
      const Field& w = v.field(1);
      r.s_part.field(1).axpy(2.0 * spec_.chi, w);
      r.f_part.field(0).axpy(-spec_.chi, differential(*basis_, w, DiffKind::curl));
      r.f_part.field(1).axpy(-spec_.chi, differential(*basis_, u, DiffKind::curl));
      break;
    }
    case ModelKind::tropical: {
      r.f_part.field(1) += differential(*basis_, v.field(2), DiffKind::gradient);
      r.f_part.field(2) += differential(*basis_, v.field(1), DiffKind::divergence);
      break;
    }
  }
  project_solenoidal(r.s_part);
  project_solenoidal(r.f_part);
  return r;
}

StateVector EvolutionOperators::apply_R(const StateVector& v) const {
  SplitR r = split_R(v);
  r.s_part += r.f_part;
  return std::move(r.s_part);
}

}  // namespace spdegal
