// quench_lab.hpp - linear-quench simulations and the composition argument
// relating transition probability, survival probability and the duration
// time needed for adiabatic evolution.

#pragma once

#include <functional>
#include <vector>

#include "adlab/ed_oracle.hpp"
#include "adlab/numkernel.hpp"

namespace adlab::quench {

/// Linear schedule lambda(t) = lambda_start + sign * t / tau0, run until
/// lambda_end is reached (total time |lambda_end - lambda_start| tau0).
struct Protocol {
  double lambda_start = 0.0;
  double lambda_end = 0.0;
  double tau0 = 1.0;
  int subdivisions = 1;  // M; the perturbative step is (end - start) / M

  void validate() const;
  double dlambda() const { return (lambda_end - lambda_start) / subdivisions; }
  double total_time() const;
  double lambda_at(double t) const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> lambdas;
  std::vector<double> fidelity;  // overlap with the ground manifold at each sample
  std::vector<double> energy;    // <Psi(t)|H(t)|Psi(t)>
  StateVector final_state;
  double final_fidelity() const { return fidelity.back(); }
};

struct AdiabaticityEstimate {
  double transition = 0.0;  // P_t
  double survival = 0.0;    // P_s
  double tau0_threshold = 0.0;
};

/// Samples taken every max(1, floor(steps / 200)) steps, plus the endpoints.
inline constexpr std::size_t kTrajectorySamples = 200;

/// Schrodinger evolution of H(lambda(t)) = base + lambda(t) driving starting
/// from the ground state at lambda_start.
Trajectory evolve_protocol(const ed::ModelFamily& family, const Protocol& protocol, double dt);

/// Final fidelity only; skips the intermediate eigendecompositions. An exactly
/// degenerate final ground level is handled by projecting onto the whole
/// ground manifold.
double final_fidelity(const ed::ModelFamily& family, const Protocol& protocol, double dt);

/// Starts in phi_0(lambda), evolves for dt under the stepped Hamiltonian
/// H(lambda + dlambda) and returns |<phi_0(lambda)|Psi(dt)>|.
double stepped_overlap(const ed::ModelFamily& family, double lambda, double dlambda, double dt, double step);

/// P_t = M (1/M)^2 chi_F = chi_F / M.
double total_transition_scale(int subdivisions, double chi_f);

/// P_s = [1 - (dt/tau0)^2 chi_F / 2]^(L^d_a). Throws BaseNegative when the
/// base leaves [0, 1].
double survival_probability(double dt, double tau0, double chi_f, double length, double d_a);

/// kappa L^d_a.
double duration_threshold(double kappa, double length, double d_a);

/// Reports count tau0 >= 10 * threshold as satisfying tau0 >> kappa L^d_a.
inline constexpr double kMuchGreaterFactor = 10.0;
bool satisfies_adiabatic_condition(double tau0, double threshold);

AdiabaticityEstimate estimate_adiabaticity(const Protocol& protocol, double chi_f, double length, double d_a,
                                           double kappa);

/// Final ground-state fidelity as a function of tau0.
using FidelityOfTau = std::function<double(double)>;

struct TauSearchOptions {
  double lower = 1e-2;
  double upper = 1e6;
  double rel_tol = 0.01;
};

/// Smallest tau0 (to rel_tol) whose final fidelity reaches target. Brackets
/// by geometric expansion from the lower bound, then bisects in log tau0.
double critical_tau_search(const FidelityOfTau& fidelity, double target, const TauSearchOptions& options = {});

/// Free-fermion Ising fidelity for a sweep h_start -> h_end; dt <= 0 selects
/// the default step for each tau0.
FidelityOfTau ising_free_fermion_fidelity(int sites, double h_start, double h_end, double dt = 0.0);

/// RK4 phase per step kept at or below this (spectral radius times dt).
inline constexpr double kMaxPhasePerStep = 0.15;

/// Default ED step: the sweep default, reduced so that rho * dt stays below
/// kMaxPhasePerStep, where rho bounds the spectral radius on the whole path.
double ed_default_dt(const ed::ModelFamily& family, double lambda_start, double lambda_end, double tau0);

/// Exact-diagonalization fidelity for any model family; dt <= 0 selects
/// ed_default_dt for each tau0.
FidelityOfTau ed_fidelity(const ed::ModelFamily& family, double lambda_start, double lambda_end, double dt = 0.0);

}  // namespace adlab::quench
