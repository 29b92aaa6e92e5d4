#include "adlab/numkernel.hpp"

#include <algorithm>
#include <cmath>

#include "adlab/kernels.hpp"

namespace adlab {

HermitianMatrix::HermitianMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw InvalidArgument("HermitianMatrix: dim must be >= 1");
}

HermitianMatrix::HermitianMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim == 0) throw InvalidArgument("HermitianMatrix: dim must be >= 1");
  if (entries_.size() != dim * dim) throw InvalidArgument("HermitianMatrix: expected dim*dim entries");
}

double HermitianMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

double HermitianMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool HermitianMatrix::is_real() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.dim_ != dim_) throw InvalidArgument("HermitianMatrix: dimension mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
  for (auto& v : entries_) v *= scale;
  return *this;
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  HermitianMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  HermitianMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

HermitianMatrix pauli_x() { return HermitianMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
HermitianMatrix pauli_y() { return HermitianMatrix(2, {0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0}); }
HermitianMatrix pauli_z() { return HermitianMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

SpectralDecomposition::SpectralDecomposition(std::vector<double> energies, std::vector<cplx> states)
    : energies_(std::move(energies)), states_(std::move(states)) {
  if (states_.size() != energies_.size() * energies_.size()) {
    throw InvalidArgument("SpectralDecomposition: states must be dim*dim");
  }
}

StateVector::StateVector(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw InvalidArgument("StateVector: empty");
  if (!(norm() > 0.0)) throw InvalidArgument("StateVector: zero vector cannot be normalized");
  renormalize();
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  std::vector<cplx> a(dim);
  a.at(index) = 1.0;
  return StateVector(std::move(a));
}

StateVector StateVector::from_span(std::span<const cplx> amplitudes) {
  return StateVector(std::vector<cplx>(amplitudes.begin(), amplitudes.end()));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

double StateVector::renormalize() {
  const double n = norm();
  const double inv = 1.0 / n;
  for (auto& a : amplitudes_) a *= inv;
  return n;
}

cplx inner(std::span<const cplx> bra, std::span<const cplx> ket) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < bra.size(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

double expectation(const HermitianMatrix& h, std::span<const cplx> psi) {
  std::vector<cplx> hpsi(psi.size());
  apply_matrix(h, psi, hpsi);
  return inner(psi, hpsi).real();
}

void apply_matrix(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out) {
  parallel::matvec(h, in, out);
}

LinearRampSource::LinearRampSource(const HermitianMatrix& base, const HermitianMatrix& driving, double lambda0,
                                   double rate)
    : base_(&base), driving_(&driving), lambda0_(lambda0), rate_(rate), scratch_(base.dim()) {
  if (base.dim() != driving.dim()) throw InvalidArgument("LinearRampSource: dimension mismatch");
}

void LinearRampSource::apply(double t, std::span<const cplx> in, std::span<cplx> out) const {
  apply_matrix(*base_, in, out);
  apply_matrix(*driving_, in, scratch_);
  const double lambda = lambda_at(t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += lambda * scratch_[i];
}

StateVector spectral_propagate(const SpectralDecomposition& dec, const StateVector& psi, double t) {
  const std::size_t n = dec.dim();
  std::vector<cplx> coeffs(n);
  parallel::project(dec, psi.amplitudes(), coeffs);
  std::vector<cplx> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx c = coeffs[m] * std::polar(1.0, -dec.energy(m) * t);
    auto phi = dec.state(m);
    for (std::size_t i = 0; i < n; ++i) out[i] += c * phi[i];
  }
  return StateVector(std::move(out));
}

}  // namespace adlab
