// ising_ff.hpp - free-fermion solution of the periodic transverse-field Ising
// chain H = -sum_j (sx_j sx_{j+1} + h sz_j).
//
// After Jordan-Wigner and Fourier transformation the even-parity sector splits
// into independent (k, -k) pairs, k = pi/N, 3pi/N, ..., (N-1)pi/N. Each pair is
// a two-level system
//
//     H_k(h) = 2 [ (h - cos k) sz + sin k sx ],   gap 4 sqrt(1 + h^2 - 2h cos k),
//
// whose ground state is rotated by the Bogoliubov angle theta_k(h). The energy
// scale matches the many-body Hamiltonian exactly, so sweep times computed
// here agree with full exact diagonalization.

#pragma once

#include <vector>

#include "adlab/kernels.hpp"
#include "adlab/numkernel.hpp"

namespace adlab::ising {

struct ChainSpec {
  int sites = 2;
  double field = 0.0;
  /// Throws OddSize for odd or too small N, InvalidArgument for h < 0.
  void validate() const;
};

struct ModeSet {
  std::vector<double> momenta;      // strictly increasing, in (0, pi)
  std::vector<double> dtheta_dh;    // per-mode Bogoliubov angle derivative
};

/// Two-level state of one (k, -k) pair during a sweep.
struct ModeAmplitude {
  double k = 0.0;
  cplx u{1.0, 0.0};
  cplx v{0.0, 0.0};
};

/// (2j - 1) pi / N for j = 1..N/2.
std::vector<double> momenta(int sites);
ModeSet mode_set(const ChainSpec& spec);

/// sin k / (2 (1 + h^2 - 2 h cos k)).
double dtheta_dh(double k, double h);

/// Fidelity susceptibility sum_k (dtheta_k/dh)^2.
double chi_f(int sites, double h);

/// Large-N limit of chi_F / N. Throws AtCriticalPoint at h = 1.
double chi_f_saturation(double h);

HermitianMatrix mode_hamiltonian(double k, double h);

/// chi_F assembled from per-mode perturbative terms |<e_k|dH_k/dh|g_k>|^2 / gap_k^2,
/// each obtained by diagonalizing the 2x2 mode Hamiltonian.
double chi_f_from_modes(int sites, double h);

/// Default step: at least 100 steps per unit of field and never above 0.01.
double default_sweep_dt(double h_start, double h_end, double tau0);

/// Ground-state-initialized linear sweep of one mode from h_start to h_end at
/// rate 1/tau0. Returns the final amplitude pair.
ModeAmplitude sweep_mode(double k, double h_start, double h_end, double tau0, double dt);

/// Excitation probability 1 - |<g_k(h_end)|psi_k>|^2 after a sweep, in [0, 1].
double lz_mode_sweep(double k, double h_start, double h_end, double tau0, double dt);

/// Asymptotic Landau-Zener excitation exp(-2 pi tau0 k^2) for a sweep through h = 1.
double landau_zener_excitation(double k, double tau0);

/// Many-body ground-state fidelity after the sweep: prod_k sqrt(1 - p_k).
double quench_ground_fidelity(int sites, double h_start, double h_end, double tau0, double dt);

/// Same product, given the per-mode excitation probabilities.
double fidelity_from_excitations(std::span<const double> excitation);

}  // namespace adlab::ising
