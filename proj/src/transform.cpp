#include "spdegal/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "spdegal/errors.hpp"

namespace spdegal {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(dim, n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    auto* buf = fftw_alloc_complex(total);
    const int dims[3] = {n, n, n};
    fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw ResourceError("FFTW could not create a plan");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

int grid_size(int cutoff, Pad pad) {
  const int span = 2 * cutoff + 1;
  int n = span;
  switch (pad) {
    case Pad::one:
      n = span;
      break;
    case Pad::three_halves:
      n = (3 * span + 1) / 2;  // ceil(1.5 * span)
      break;
    case Pad::two:
      n = 2 * span;
      break;
  }
  if (n % 2 != 0) ++n;
  return n;
}

std::size_t PhysicalField::points() const {
  std::size_t p = 1;
  for (int a = 0; a < dim; ++a) p *= static_cast<std::size_t>(points_per_axis);
  return p;
}

SpectralGrid::SpectralGrid(std::shared_ptr<const SpectralBasis> basis, Pad pad)
    : basis_(std::move(basis)), pad_(pad) {
  const int d = basis_->dim();
  n_ = grid_size(basis_->cutoff(), pad);
  points_ = 1;
  for (int a = 0; a < d; ++a) points_ *= static_cast<std::size_t>(n_);
  grid_index_.resize(basis_->size());
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const Mode& k = basis_->mode(i);
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      const int w = ((k[a] % n_) + n_) % n_;
      idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(w);
    }
    grid_index_[i] = idx;
  }
  forward_ = plan_cache().get(d, n_, FFTW_FORWARD);
  backward_ = plan_cache().get(d, n_, FFTW_BACKWARD);
}

std::vector<double> SpectralGrid::to_physical(std::span<const cplx> coeffs,
                                              double* imag_residue) const {
  if (coeffs.size() != basis_->size()) throw ShapeError("to_physical: coefficient block size");
  std::vector<cplx> buf(points_);
  for (std::size_t i = 0; i < coeffs.size(); ++i) buf[grid_index_[i]] = coeffs[i];
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
  std::vector<double> out(points_);
  double resid = 0.0;
  for (std::size_t j = 0; j < points_; ++j) {
    out[j] = buf[j].real();
    resid = std::max(resid, std::abs(buf[j].imag()));
  }
  if (imag_residue != nullptr) *imag_residue = resid;
  return out;
}

std::vector<cplx> SpectralGrid::to_spectral(std::span<const double> values) const {
  if (values.size() != points_) throw ShapeError("to_spectral: grid size does not match basis");
  std::vector<cplx> buf(values.begin(), values.end());
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
  const double scale = 1.0 / static_cast<double>(points_);
  std::vector<cplx> out(basis_->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[grid_index_[i]] * scale;
  return out;
}

PhysicalField to_physical(const std::shared_ptr<const SpectralBasis>& basis, const Field& f,
                          Pad pad) {
  SpectralGrid grid(basis, pad);
  PhysicalField out;
  out.dim = basis->dim();
  out.points_per_axis = grid.points_per_axis();
  out.components = f.components();
  out.values.reserve(grid.points() * static_cast<std::size_t>(f.components()));
  for (int c = 0; c < f.components(); ++c) {
    double resid = 0.0;
    auto vals = grid.to_physical(f.component(c), &resid);
    double magnitude = 0.0;
    for (const auto& z : f.component(c)) magnitude += std::abs(z);
    if (resid > 1e-12 * magnitude) {
      throw StateIntegrityError("to_physical: field is not real-valued (Hermitian symmetry broken)");
    }
    out.values.insert(out.values.end(), vals.begin(), vals.end());
  }
  return out;
}

Field to_spectral(const PhysicalField& values, const std::shared_ptr<const SpectralBasis>& basis,
                  Pad pad, bool solenoidal) {
  if (values.dim != basis->dim() || values.points_per_axis != grid_size(basis->cutoff(), pad) ||
      values.values.size() != values.points() * static_cast<std::size_t>(values.components)) {
    throw ShapeError("to_spectral: grid does not match basis and padding");
  }
  SpectralGrid grid(basis, pad);
  Field out(basis->size(), values.components, solenoidal);
  for (int c = 0; c < values.components; ++c) {
    auto coeffs = grid.to_spectral(values.component(c));
    std::copy(coeffs.begin(), coeffs.end(), out.component(c).begin());
  }
  return out;
}

}  // namespace spdegal
