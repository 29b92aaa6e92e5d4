// ed_oracle.hpp - model-independent fidelity machinery on exactly
// diagonalized Hamiltonians of the form H(lambda) = H_0 + lambda H_I.
//
// Two models are provided: the periodic transverse-field Ising chain in its
// full 2^N space, and the Lipkin-Meshkov-Glick model in the maximal-spin
// sector (dimension N+1). For LMG the convention is
//
//   H = -(1/N) sum_{i<j} (sx_i sx_j + gamma sy_i sy_j) - h sum_i sz_i
//     = -(2/N)(Sx^2 + gamma Sy^2) + (1 + gamma)/2 - 2 h Sz,
//
// which puts the critical field at h_c = 1.

#pragma once

#include "adlab/numkernel.hpp"

namespace adlab::ed {

enum class ModelKind { Ising, Lmg };

inline constexpr int kIsingMinSites = 4;
inline constexpr int kIsingMaxSites = 14;
inline constexpr int kLmgMaxSites = 8192;

struct SpinModelSpec {
  ModelKind kind = ModelKind::Ising;
  int sites = 4;
  double lambda = 0.0;  // transverse field h
  double gamma = 0.0;   // LMG anisotropy, ignored for Ising
  void validate() const;
};

/// H(lambda) = base + lambda * driving.
struct ModelFamily {
  HermitianMatrix base;
  HermitianMatrix driving;
  HermitianMatrix at(double lambda) const { return base + lambda * driving; }
  std::size_t dim() const { return base.dim(); }
};

/// One perturbative subdivision of a sweep.
struct PerturbationStep {
  double lambda = 0.0;
  double dlambda = 0.0;
  double dt = 0.0;  // equals dlambda * tau0 when tied to a protocol
  int subdivisions = 1;
  static PerturbationStep from_protocol(double lambda, double dlambda, double tau0, int subdivisions);
};

ModelFamily ising_family(int sites);
HermitianMatrix build_ising(int sites, double h);

ModelFamily lmg_family(int sites, double gamma);
HermitianMatrix build_lmg(int sites, double h, double gamma);

ModelFamily family_for(const SpinModelSpec& spec);

/// Ground-state splitting below which fidelity quantities are undefined.
inline constexpr double kDegeneracyTol = 1e-10;

/// sum_{n != 0} |<phi_n|H_I|phi_0>|^2 / (e_n - e_0)^2.
double chi_f_perturbative(const SpectralDecomposition& dec, const HermitianMatrix& driving);

/// |<phi_0(a)|phi_0(b)>|.
double ground_fidelity(const SpectralDecomposition& a, const SpectralDecomposition& b);

/// 2 (1 - F(lambda, lambda + dlambda)) / dlambda^2.
double chi_f_finite_difference(const ModelFamily& family, double lambda, double dlambda);

struct FiniteDifferenceEstimate {
  double value = 0.0;       // estimate at dlambda
  double half_step = 0.0;   // estimate at dlambda / 2
  double extrapolated = 0.0;  // 2 half_step - value (removes the O(dlambda) term)
  bool converged = false;     // |value - half_step| <= tol * |half_step|
};

/// Finite-difference chi_F with the mandatory half-step convergence check.
FiniteDifferenceEstimate chi_f_finite_difference_checked(const ModelFamily& family, double lambda,
                                                         double dlambda = 1e-3, double rel_tol = 1e-2);

/// Perturbative Loschmidt-echo fidelity:
/// 1 - dlambda^2 sum_{n != 0} |H_I^{n0}|^2 (1 - cos(omega_0n dt)) / omega_0n^2.
double loschmidt_F1(const SpectralDecomposition& dec, const HermitianMatrix& driving, double dlambda, double dt);

/// 1 - dlambda^2 chi_F / 2.
double lower_bound_F2(const SpectralDecomposition& dec, const HermitianMatrix& driving, double dlambda);

/// |H_I^{n0}|^2 for every n (n = 0 included).
std::vector<double> transition_weights(const SpectralDecomposition& dec, const HermitianMatrix& driving);

}  // namespace adlab::ed
