#include "spdegal/state.hpp"

#include <algorithm>
#include <cmath>

#include "spdegal/errors.hpp"

namespace spdegal {

namespace {

constexpr cplx I{0.0, 1.0};

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

Field::Field(std::size_t modes, int components, bool solenoidal)
    : modes_(modes), components_(components), solenoidal_(solenoidal),
      data_(modes * static_cast<std::size_t>(components)) {}

Field& Field::operator+=(const Field& other) {
  if (!same_shape(other)) throw ShapeError("field shapes differ in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!same_shape(other)) throw ShapeError("field shapes differ in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

void Field::axpy(double s, const Field& other) {
  if (!same_shape(other)) throw ShapeError("field shapes differ in axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

// ---------------------------------------------------------------------------
// StateVector

Field& StateVector::add_field(std::string name, int components, bool solenoidal) {
  if (!basis_) throw ArgumentError("state vector has no basis");
  if (has_field(name)) throw ArgumentError("duplicate field '" + name + "'");
  if (components != 1 && components != basis_->dim()) {
    throw ShapeError("field '" + name + "' must have 1 or d components");
  }
  if (solenoidal && components == 1) {
    throw TypeError("scalar field '" + name + "' cannot be divergence-free");
  }
  entries_.push_back({std::move(name), Field(basis_->size(), components, solenoidal)});
  return entries_.back().field;
}

Field& StateVector::field(const std::string& name) {
  for (auto& e : entries_) {
    if (e.name == name) return e.field;
  }
  throw TypeError("state has no field '" + name + "'");
}

const Field& StateVector::field(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.field;
  }
  throw TypeError("state has no field '" + name + "'");
}

bool StateVector::has_field(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.name == name; });
}

std::vector<std::string> StateVector::roster() const {
  std::vector<std::string> names;
  for (const auto& e : entries_) names.push_back(e.name);
  return names;
}

bool StateVector::compatible(const StateVector& other) const {
  if (!basis_ || !other.basis_) return false;
  if (!(*basis_ == *other.basis_)) return false;
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name != other.entries_[i].name) return false;
    if (!entries_[i].field.same_shape(other.entries_[i].field)) return false;
  }
  return true;
}

void StateVector::require_compatible(const StateVector& other, const char* context) const {
  if (!compatible(other)) {
    throw TypeError(std::string(context) + ": state rosters or bases do not match");
  }
}

StateVector StateVector::zeros_like() const {
  StateVector z(basis_);
  for (const auto& e : entries_) {
    z.add_field(e.name, e.field.components(), e.field.solenoidal());
  }
  return z;
}

bool StateVector::all_finite() const {
  for (const auto& e : entries_) {
    for (const auto& c : e.field.data()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
  }
  return true;
}

void StateVector::set_zero() {
  for (auto& e : entries_) std::fill(e.field.data().begin(), e.field.data().end(), cplx{});
}

StateVector& StateVector::operator+=(const StateVector& other) {
  require_compatible(other, "state +=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].field += other.entries_[i].field;
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  require_compatible(other, "state -=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].field -= other.entries_[i].field;
  return *this;
}

StateVector& StateVector::operator*=(double s) {
  for (auto& e : entries_) e.field *= s;
  return *this;
}

void StateVector::axpy(double s, const StateVector& other) {
  require_compatible(other, "state axpy");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].field.axpy(s, other.entries_[i].field);
}

bool operator==(const StateVector& a, const StateVector& b) {
  if (!a.compatible(b)) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto& x = a.entries_[i].field.data();
    const auto& y = b.entries_[i].field.data();
    if (!std::equal(x.begin(), x.end(), y.begin())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural checks

double hermitian_defect(const SpectralBasis& basis, const Field& f) {
  double worst = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      worst = std::max(worst, std::abs(f.at(c, basis.conjugate(i)) - std::conj(f.at(c, i))));
    }
  }
  return worst;
}

double divergence_defect(const SpectralBasis& basis, const Field& f) {
  if (f.components() == 1) throw TypeError("divergence defect needs a vector field");
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mode& k = basis.mode(i);
    cplx dot{};
    for (int a = 0; a < f.components(); ++a) dot += static_cast<double>(k[a]) * f.at(a, i);
    worst = std::max(worst, std::abs(dot) / std::sqrt(basis.mu(i)));
  }
  return worst;
}

void require_solenoidal(const SpectralBasis& basis, const Field& f, const std::string& name) {
  if (!f.solenoidal()) return;
  const double scale = max_abs(f.data());
  if (scale == 0.0) return;
  const double defect = divergence_defect(basis, f);
  if (defect > 1e-12 * scale) {
    throw StateIntegrityError("field '" + name + "' is not divergence-free (defect " +
                              std::to_string(defect / scale) + " relative)");
  }
}

// ---------------------------------------------------------------------------
// Spectral operators

void leray_project_inplace(const SpectralBasis& basis, Field& f) {
  if (f.components() == 1) throw TypeError("Leray projection needs a vector field");
  const int d = f.components();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Mode& k = basis.mode(i);
    cplx dot{};
    for (int a = 0; a < d; ++a) dot += static_cast<double>(k[a]) * f.at(a, i);
    const cplx s = dot / basis.mu(i);
    for (int a = 0; a < d; ++a) f.at(a, i) -= static_cast<double>(k[a]) * s;
  }
}

Field leray_project(const SpectralBasis& basis, const Field& f) {
  Field out = f;
  leray_project_inplace(basis, out);
  return out;
}

Field differential(const SpectralBasis& basis, const Field& f, DiffKind kind) {
  const int d = basis.dim();
  const std::size_t n = basis.size();
  switch (kind) {
    case DiffKind::gradient: {
      if (f.components() != 1) throw TypeError("gradient needs a scalar field");
      Field out(n, d, false);
      for (std::size_t i = 0; i < n; ++i) {
        const Mode& k = basis.mode(i);
        for (int a = 0; a < d; ++a) out.at(a, i) = I * static_cast<double>(k[a]) * f.at(0, i);
      }
      return out;
    }
    case DiffKind::divergence: {
      if (f.components() != d) throw TypeError("divergence needs a vector field");
      Field out(n, 1, false);
      for (std::size_t i = 0; i < n; ++i) {
        const Mode& k = basis.mode(i);
        cplx acc{};
        for (int a = 0; a < d; ++a) acc += static_cast<double>(k[a]) * f.at(a, i);
        out.at(0, i) = I * acc;
      }
      return out;
    }
    case DiffKind::laplacian: {
      Field out(n, f.components(), f.solenoidal());
      for (int c = 0; c < f.components(); ++c) {
        for (std::size_t i = 0; i < n; ++i) out.at(c, i) = -basis.mu(i) * f.at(c, i);
      }
      return out;
    }
    case DiffKind::curl: {
      if (d == 3) {
        if (f.components() != 3) throw TypeError("3D curl needs a vector field");
        Field out(n, 3, true);
        for (std::size_t i = 0; i < n; ++i) {
          const Mode& k = basis.mode(i);
          const cplx vx = f.at(0, i), vy = f.at(1, i), vz = f.at(2, i);
          out.at(0, i) = I * (double(k[1]) * vz - double(k[2]) * vy);
          out.at(1, i) = I * (double(k[2]) * vx - double(k[0]) * vz);
          out.at(2, i) = I * (double(k[0]) * vy - double(k[1]) * vx);
        }
        return out;
      }
      if (f.components() == 2) {
        Field out(n, 1, false);
        for (std::size_t i = 0; i < n; ++i) {
          const Mode& k = basis.mode(i);
          out.at(0, i) = I * (double(k[0]) * f.at(1, i) - double(k[1]) * f.at(0, i));
        }
        return out;
      }
      Field out(n, 2, true);
      for (std::size_t i = 0; i < n; ++i) {
        const Mode& k = basis.mode(i);
        out.at(0, i) = I * double(k[1]) * f.at(0, i);
        out.at(1, i) = -I * double(k[0]) * f.at(0, i);
      }
      return out;
    }
  }
  throw TypeError("unknown differential kind");
}

double field_sobolev2(const SpectralBasis& basis, const Field& f, double alpha,
                      const FieldScale& scale) {
  const std::size_t n = basis.size();
  const int comps = f.components();
  double sum = 0.0;
  const bool longitudinal = comps > 1 && scale.nu_long != 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = basis.mu(i);
    const double wt = alpha == 0.0 ? 1.0 : std::pow(scale.nu * mu, 2.0 * alpha);
    if (!longitudinal) {
      double mag = 0.0;
      for (int c = 0; c < comps; ++c) mag += std::norm(f.at(c, i));
      sum += wt * mag;
      continue;
    }
    const Mode& k = basis.mode(i);
    cplx dot{};
    for (int c = 0; c < comps; ++c) dot += static_cast<double>(k[c]) * f.at(c, i);
    const double along = std::norm(dot) / mu;
    double total = 0.0;
    for (int c = 0; c < comps; ++c) total += std::norm(f.at(c, i));
    const double across = std::max(0.0, total - along);
    const double wl = alpha == 0.0 ? 1.0 : std::pow((scale.nu + scale.nu_long) * mu, 2.0 * alpha);
    sum += wt * across + wl * along;
  }
  return sum;
}

double sobolev2(const StateVector& v, double alpha, const ScaleSet& scales) {
  if (scales.size() != v.field_count()) throw TypeError("scale set does not match roster");
  double sum = 0.0;
  for (std::size_t f = 0; f < v.field_count(); ++f) {
    sum += field_sobolev2(v.basis(), v.field(f), alpha, scales[f]);
  }
  return sum;
}

double inner_product(const StateVector& a, const StateVector& b, double alpha,
                     const ScaleSet& scales) {
  a.require_compatible(b, "inner_product");
  if (scales.size() != a.field_count()) throw TypeError("scale set does not match roster");
  const SpectralBasis& basis = a.basis();
  const std::size_t n = basis.size();
  double sum = 0.0;
  for (std::size_t f = 0; f < a.field_count(); ++f) {
    const Field& x = a.field(f);
    const Field& y = b.field(f);
    const FieldScale& s = scales[f];
    const int comps = x.components();
    const bool longitudinal = comps > 1 && s.nu_long != 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = basis.mu(i);
      const double wt = alpha == 0.0 ? 1.0 : std::pow(s.nu * mu, 2.0 * alpha);
      if (!longitudinal) {
        double acc = 0.0;
        for (int c = 0; c < comps; ++c) acc += std::real(std::conj(x.at(c, i)) * y.at(c, i));
        sum += wt * acc;
        continue;
      }
      // Split into the part along k and the part across k; A^alpha scales them
      // by different eigenvalues.
      const Mode& k = basis.mode(i);
      cplx kx{}, ky{};
      for (int c = 0; c < comps; ++c) {
        kx += static_cast<double>(k[c]) * x.at(c, i);
        ky += static_cast<double>(k[c]) * y.at(c, i);
      }
      const double along = std::real(std::conj(kx) * ky) / mu;
      double total = 0.0;
      for (int c = 0; c < comps; ++c) total += std::real(std::conj(x.at(c, i)) * y.at(c, i));
      const double wl =
          alpha == 0.0 ? 1.0 : std::pow((s.nu + s.nu_long) * mu, 2.0 * alpha);
      sum += wt * (total - along) + wl * along;
    }
  }
  return sum;
}

double inner_product(const StateVector& a, const StateVector& b, double alpha) {
  return inner_product(a, b, alpha, ScaleSet(a.field_count()));
}

std::vector<double> field_energies(const StateVector& v) {
  std::vector<double> out;
  for (std::size_t f = 0; f < v.field_count(); ++f) {
    double s = 0.0;
    for (const auto& c : v.field(f).data()) s += std::norm(c);
    out.push_back(s);
  }
  return out;
}

void project_Pn_inplace(StateVector& v, GalerkinLevel level) {
  const SpectralBasis& basis = v.basis();
  basis.check_level(level);
  for (std::size_t f = 0; f < v.field_count(); ++f) {
    Field& x = v.field(f);
    for (int c = 0; c < x.components(); ++c) {
      auto block = x.component(c);
      std::fill(block.begin() + static_cast<std::ptrdiff_t>(level.n), block.end(), cplx{});
    }
  }
}

StateVector project_Pn(const StateVector& v, GalerkinLevel level) {
  StateVector out = v;
  project_Pn_inplace(out, level);
  return out;
}

}  // namespace spdegal
