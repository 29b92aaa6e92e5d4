#include "adlab/quench_lab.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "adlab/ising_ff.hpp"

namespace adlab::quench {
namespace {

// Projection onto the ground manifold (levels within kDegeneracyTol of e0).
// Exact symmetry degeneracies, such as the Ising Z2 doublet at h = 0, leave
// the evolved state in one sector, so this equals the in-sector fidelity.
double ground_manifold_overlap(const SpectralDecomposition& dec, std::span<const cplx> psi) {
  double weight = 0.0;
  for (std::size_t n = 0; n < dec.dim() && dec.energy(n) - dec.energy(0) < ed::kDegeneracyTol; ++n) {
    weight += std::norm(inner(dec.state(n), psi));
  }
  return std::min(1.0, std::sqrt(weight));
}

}  // namespace

void Protocol::validate() const {
  if (!(tau0 > 0.0)) throw InvalidArgument("protocol tau0 must be positive");
  if (subdivisions < 1) throw InvalidArgument("protocol subdivision count M must be >= 1");
  if (!std::isfinite(lambda_start) || !std::isfinite(lambda_end)) throw InvalidArgument("protocol endpoints must be finite");
}

double Protocol::total_time() const { return std::abs(lambda_end - lambda_start) * tau0; }

double Protocol::lambda_at(double t) const {
  const double sign = lambda_end >= lambda_start ? 1.0 : -1.0;
  return lambda_start + sign * t / tau0;
}

Trajectory evolve_protocol(const ed::ModelFamily& family, const Protocol& protocol, double dt) {
  protocol.validate();
  if (!(dt > 0.0)) throw InvalidArgument("evolve_protocol: dt must be positive");

  const auto initial = eigh(family.at(protocol.lambda_start));
  if (initial.ground_gap() < ed::kDegeneracyTol) throw DegenerateGroundState("evolve_protocol: degenerate initial state");

  const double total = protocol.total_time();
  const std::size_t steps = total > 0.0 ? static_cast<std::size_t>(std::ceil(total / dt)) : 0;
  const double h = steps > 0 ? total / static_cast<double>(steps) : 0.0;
  const std::size_t every = std::max<std::size_t>(1, steps / kTrajectorySamples);
  const double sign = protocol.lambda_end >= protocol.lambda_start ? 1.0 : -1.0;
  const LinearRampSource source(family.base, family.driving, protocol.lambda_start, sign / protocol.tau0);

  Trajectory traj;
  StateVector psi = StateVector::from_span(initial.state(0));
  auto record = [&](double t) {
    const double lambda = steps > 0 ? source.lambda_at(t) : protocol.lambda_end;
    const auto hmat = family.at(lambda);
    const auto dec = eigh(hmat);
    traj.times.push_back(t);
    traj.lambdas.push_back(lambda);
    traj.fidelity.push_back(ground_manifold_overlap(dec, psi.amplitudes()));
    traj.energy.push_back(expectation(hmat, psi.amplitudes()));
  };

  record(0.0);
  Rk4Stepper stepper(psi.dim());
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * h;
    stepper.step(source, psi, t, h);
    if ((s + 1) % every == 0 || s + 1 == steps) record(static_cast<double>(s + 1) * h);
  }
  traj.final_state = std::move(psi);
  return traj;
}

double final_fidelity(const ed::ModelFamily& family, const Protocol& protocol, double dt) {
  protocol.validate();
  const auto initial = eigh(family.at(protocol.lambda_start));
  const auto final = eigh(family.at(protocol.lambda_end));
  if (initial.ground_gap() < ed::kDegeneracyTol) {
    throw DegenerateGroundState("final_fidelity: degenerate initial ground state");
  }
  const double sign = protocol.lambda_end >= protocol.lambda_start ? 1.0 : -1.0;
  const LinearRampSource source(family.base, family.driving, protocol.lambda_start, sign / protocol.tau0);
  const auto psi = evolve(source, StateVector::from_span(initial.state(0)), 0.0, protocol.total_time(), dt);
  return ground_manifold_overlap(final, psi.amplitudes());
}

double stepped_overlap(const ed::ModelFamily& family, double lambda, double dlambda, double dt, double step) {
  const auto dec = eigh(family.at(lambda));
  if (dec.ground_gap() < ed::kDegeneracyTol) throw DegenerateGroundState("stepped_overlap: degenerate ground state");
  const auto stepped = family.at(lambda + dlambda);
  const ConstantSource source(stepped);
  const auto psi = evolve(source, StateVector::from_span(dec.state(0)), 0.0, dt, step);
  return std::min(1.0, std::abs(inner(dec.state(0), psi.amplitudes())));
}

double total_transition_scale(int subdivisions, double chi_f) {
  if (subdivisions < 1) throw InvalidArgument("subdivision count M must be >= 1");
  if (chi_f < 0.0) throw InvalidArgument("chi_F must be >= 0");
  const double m = subdivisions;
  return m * (1.0 / m) * (1.0 / m) * chi_f;
}

double survival_probability(double dt, double tau0, double chi_f, double length, double d_a) {
  if (!(tau0 > 0.0)) throw InvalidArgument("survival_probability: tau0 must be positive");
  const double ratio = dt / tau0;
  const double base = 1.0 - 0.5 * ratio * ratio * chi_f;
  if (base < 0.0 || base > 1.0) {
    throw BaseNegative("survival_probability: base " + std::to_string(base) + " outside the perturbative regime");
  }
  return std::pow(base, std::pow(length, d_a));
}

double duration_threshold(double kappa, double length, double d_a) {
  if (!(kappa > 0.0)) throw InvalidArgument("duration_threshold: kappa must be positive");
  if (!(length >= 1.0)) throw InvalidArgument("duration_threshold: L must be >= 1");
  return kappa * std::pow(length, d_a);
}

bool satisfies_adiabatic_condition(double tau0, double threshold) { return tau0 >= kMuchGreaterFactor * threshold; }

AdiabaticityEstimate estimate_adiabaticity(const Protocol& protocol, double chi_f, double length, double d_a,
                                           double kappa) {
  protocol.validate();
  AdiabaticityEstimate est;
  est.transition = total_transition_scale(protocol.subdivisions, chi_f);
  const double dt = std::abs(protocol.dlambda()) * protocol.tau0;
  est.survival = survival_probability(dt, protocol.tau0, chi_f, length, d_a);
  est.tau0_threshold = duration_threshold(kappa, length, d_a);
  return est;
}

double critical_tau_search(const FidelityOfTau& fidelity, double target, const TauSearchOptions& options) {
  if (!(target < 1.0)) throw InvalidArgument("critical_tau_search: target fidelity must be < 1");
  if (!(options.lower > 0.0 && options.upper > options.lower)) throw InvalidArgument("critical_tau_search: bad bounds");
  if (fidelity(options.lower) >= target) return options.lower;

  constexpr double kGrowth = 4.0;
  double below = options.lower;
  double above = options.lower;
  for (;;) {
    if (above >= options.upper) {
      throw NotBracketed("critical_tau_search: fidelity " + std::to_string(target) + " not reached by tau0=" +
                         std::to_string(options.upper));
    }
    below = above;
    above = std::min(above * kGrowth, options.upper);
    if (fidelity(above) >= target) break;
  }
  while (above / below > 1.0 + options.rel_tol) {
    const double mid = std::sqrt(above * below);
    if (fidelity(mid) >= target) {
      above = mid;
    } else {
      below = mid;
    }
  }
  return above;
}

FidelityOfTau ising_free_fermion_fidelity(int sites, double h_start, double h_end, double dt) {
  ising::momenta(sites);  // validates N up front
  return [=](double tau0) {
    const double step = dt > 0.0 ? dt : ising::default_sweep_dt(h_start, h_end, tau0);
    return ising::quench_ground_fidelity(sites, h_start, h_end, tau0, step);
  };
}

namespace {

// H is affine in lambda, so its spectral radius on the segment peaks at an end.
double path_spectral_radius(const ed::ModelFamily& family, double lambda_start, double lambda_end) {
  double rho = 0.0;
  for (double lambda : {lambda_start, lambda_end}) {
    const auto dec = eigh(family.at(lambda));
    rho = std::max({rho, std::abs(dec.energy(0)), std::abs(dec.energy(dec.dim() - 1))});
  }
  return rho;
}

double capped_step(double rho, double lambda_start, double lambda_end, double tau0) {
  const double dt = ising::default_sweep_dt(lambda_start, lambda_end, tau0);
  return rho > 0.0 ? std::min(dt, kMaxPhasePerStep / rho) : dt;
}

}  // namespace

double ed_default_dt(const ed::ModelFamily& family, double lambda_start, double lambda_end, double tau0) {
  return capped_step(path_spectral_radius(family, lambda_start, lambda_end), lambda_start, lambda_end, tau0);
}

FidelityOfTau ed_fidelity(const ed::ModelFamily& family, double lambda_start, double lambda_end, double dt) {
  auto shared = std::make_shared<const ed::ModelFamily>(family);
  const double rho = dt > 0.0 ? 0.0 : path_spectral_radius(family, lambda_start, lambda_end);
  return [shared, lambda_start, lambda_end, dt, rho](double tau0) {
    const double step = dt > 0.0 ? dt : capped_step(rho, lambda_start, lambda_end, tau0);
    return final_fidelity(*shared, {lambda_start, lambda_end, tau0, 1}, step);
  };
}

}  // namespace adlab::quench
