// numkernel.hpp - dense Hermitian linear algebra and norm-preserving time
// stepping shared by every model in the library.

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "adlab/errors.hpp"

namespace adlab {

using cplx = std::complex<double>;

/// Dense square matrix stored row-major. Hermiticity is not enforced on
/// construction; eigh() validates it before decomposing.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim);
  HermitianMatrix(std::size_t dim, std::vector<cplx> entries);

  std::size_t dim() const noexcept { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
  std::span<const cplx> row(std::size_t i) const noexcept { return {entries_.data() + i * dim_, dim_}; }
  std::span<const cplx> entries() const noexcept { return entries_; }

  /// Largest |H_ij - conj(H_ji)|.
  double hermiticity_defect() const;
  /// Max-abs-entry norm, used to scale residual tolerances.
  double max_abs() const;
  bool is_real() const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double scale);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> values);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> entries_;
};

// Pauli matrices, handy for tests and for two-level models.
HermitianMatrix pauli_x();
HermitianMatrix pauli_y();
HermitianMatrix pauli_z();

/// Eigenpairs of an instant Hamiltonian. Energies ascend; eigenvector n is
/// stored contiguously and has its first non-negligible component real
/// positive.
class SpectralDecomposition {
 public:
  SpectralDecomposition() = default;
  SpectralDecomposition(std::vector<double> energies, std::vector<cplx> states);

  std::size_t dim() const noexcept { return energies_.size(); }
  std::span<const double> energies() const noexcept { return energies_; }
  double energy(std::size_t n) const { return energies_[n]; }
  std::span<const cplx> state(std::size_t n) const noexcept { return {states_.data() + n * dim(), dim()}; }
  /// Bohr frequency omega_nm = e_n - e_m.
  double omega(std::size_t n, std::size_t m) const { return energies_[n] - energies_[m]; }
  double ground_gap() const { return dim() > 1 ? energies_[1] - energies_[0] : 0.0; }

 private:
  std::vector<double> energies_;
  std::vector<cplx> states_;
};

struct EighOptions {
  std::size_t dim_cap = 4096;
  double hermitian_tol = 1e-10;
};

/// Householder tridiagonalization followed by implicit QL. Disconnected
/// blocks of the sparsity pattern (symmetry sectors) are solved separately
/// and merged; real blocks take a real-arithmetic path.
SpectralDecomposition eigh(const HermitianMatrix& h, const EighOptions& options = {});

/// Normalized state. The invariant |psi| = 1 is restored after each step.
class StateVector {
 public:
  StateVector() = default;
  /// Normalizes the given amplitudes; throws InvalidArgument on a zero vector.
  explicit StateVector(std::vector<cplx> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector from_span(std::span<const cplx> amplitudes);

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  std::span<cplx> mutable_amplitudes() noexcept { return amplitudes_; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;
  /// Rescales to unit norm and returns the norm it had before.
  double renormalize();

 private:
  std::vector<cplx> amplitudes_;
};

cplx inner(std::span<const cplx> bra, std::span<const cplx> ket);
double expectation(const HermitianMatrix& h, std::span<const cplx> psi);

/// A time-dependent Hamiltonian that can act on a vector: out = H(t) in.
template <class S>
concept HamiltonianSource = requires(const S& s, double t, std::span<const cplx> in, std::span<cplx> out) {
  { s.dim() } -> std::convertible_to<std::size_t>;
  s.apply(t, in, out);
};

void apply_matrix(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out);

class ConstantSource {
 public:
  explicit ConstantSource(const HermitianMatrix& h) : h_(&h) {}
  std::size_t dim() const { return h_->dim(); }
  void apply(double, std::span<const cplx> in, std::span<cplx> out) const { apply_matrix(*h_, in, out); }

 private:
  const HermitianMatrix* h_;
};

/// H(t) = base + lambda(t) driving with lambda(t) = lambda0 + rate t.
class LinearRampSource {
 public:
  LinearRampSource(const HermitianMatrix& base, const HermitianMatrix& driving, double lambda0, double rate);
  std::size_t dim() const { return base_->dim(); }
  double lambda_at(double t) const { return lambda0_ + rate_ * t; }
  void apply(double t, std::span<const cplx> in, std::span<cplx> out) const;

 private:
  const HermitianMatrix* base_;
  const HermitianMatrix* driving_;
  double lambda0_;
  double rate_;
  mutable std::vector<cplx> scratch_;
};

/// Wraps an arbitrary matrix-valued function of time. Rebuilds H(t) on every
/// call, so it is meant for small problems and tests.
class MatrixFunctionSource {
 public:
  MatrixFunctionSource(std::size_t dim, std::function<HermitianMatrix(double)> fn)
      : dim_(dim), fn_(std::move(fn)) {}
  std::size_t dim() const { return dim_; }
  void apply(double t, std::span<const cplx> in, std::span<cplx> out) const { apply_matrix(fn_(t), in, out); }

 private:
  std::size_t dim_;
  std::function<HermitianMatrix(double)> fn_;
};

inline constexpr double kStepDriftLimit = 1e-6;

/// Classical fourth-order Runge-Kutta for i d/dt psi = H(t) psi (hbar = 1).
/// Buffers are allocated once per stepper so repeated steps do not allocate.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

  /// Advances psi from t to t + dt in place and renormalizes. Returns the
  /// norm drift |norm - 1| seen before renormalization.
  template <HamiltonianSource S>
  double step(const S& h, StateVector& psi, double t, double dt);

 private:
  template <HamiltonianSource S>
  void rhs(const S& h, double t, std::span<const cplx> in, std::vector<cplx>& out);

  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

template <HamiltonianSource S>
void Rk4Stepper::rhs(const S& h, double t, std::span<const cplx> in, std::vector<cplx>& out) {
  h.apply(t, in, out);
  const cplx minus_i{0.0, -1.0};
  for (auto& v : out) v *= minus_i;
}

template <HamiltonianSource S>
double Rk4Stepper::step(const S& h, StateVector& psi, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("evolve_step: dt must be positive");
  if (h.dim() != psi.dim()) throw InvalidArgument("evolve_step: dimension mismatch");
  const std::size_t n = psi.dim();
  auto y = psi.mutable_amplitudes();

  rhs(h, t, y, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
  rhs(h, t + 0.5 * dt, tmp_, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
  rhs(h, t + 0.5 * dt, tmp_, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
  rhs(h, t + dt, tmp_, k4_);
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) y[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);

  const double drift = std::abs(psi.renormalize() - 1.0);
  if (drift > kStepDriftLimit) {
    throw StepTooLarge("evolve_step: norm drift " + std::to_string(drift) + " at t=" + std::to_string(t) +
                       ", reduce dt");
  }
  return drift;
}

/// One fourth-order step from t to t + dt, returning the new state.
template <HamiltonianSource S>
StateVector evolve_step(const S& h, StateVector psi, double t, double dt) {
  Rk4Stepper stepper(psi.dim());
  stepper.step(h, psi, t, dt);
  return psi;
}

/// Integrates from t0 over total time with steps no larger than max_dt; the
/// step is shrunk uniformly so the final time is hit exactly.
template <HamiltonianSource S>
StateVector evolve(const S& h, StateVector psi, double t0, double total, double max_dt) {
  if (total <= 0.0) return psi;
  if (!(max_dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(total / max_dt));
  const double dt = total / static_cast<double>(steps);
  Rk4Stepper stepper(psi.dim());
  for (std::size_t s = 0; s < steps; ++s) stepper.step(h, psi, t0 + static_cast<double>(s) * dt, dt);
  return psi;
}

/// exp(-i H t) psi built from a spectral decomposition of H.
StateVector spectral_propagate(const SpectralDecomposition& dec, const StateVector& psi, double t);

}  // namespace adlab
