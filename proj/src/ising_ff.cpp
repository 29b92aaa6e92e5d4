#include "adlab/ising_ff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace adlab::ising {
namespace {

void require_even(int sites) {
  if (sites < 2 || sites % 2 != 0) {
    throw OddSize("Ising chain needs an even number of sites >= 2, got " + std::to_string(sites));
  }
}

void require_field(double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("transverse field must be finite and >= 0");
}

// H_k(h(t)) for the linear schedule h(t) = h0 + rate t, applied without
// building a matrix.
class ModeRampSource {
 public:
  ModeRampSource(double k, double h0, double rate)
      : cos_k_(std::cos(k)), sin2_(2.0 * std::sin(k)), h0_(h0), rate_(rate) {}
  std::size_t dim() const { return 2; }
  void apply(double t, std::span<const cplx> in, std::span<cplx> out) const {
    const double a = 2.0 * (h0_ + rate_ * t - cos_k_);
    out[0] = a * in[0] + sin2_ * in[1];
    out[1] = sin2_ * in[0] - a * in[1];
  }

 private:
  double cos_k_, sin2_, h0_, rate_;
};

StateVector mode_ground_state(double k, double h) {
  return StateVector::from_span(eigh(mode_hamiltonian(k, h)).state(0));
}

}  // namespace

void ChainSpec::validate() const {
  require_even(sites);
  require_field(field);
}

std::vector<double> momenta(int sites) {
  require_even(sites);
  std::vector<double> ks(static_cast<std::size_t>(sites / 2));
  for (std::size_t j = 0; j < ks.size(); ++j) {
    ks[j] = static_cast<double>(2 * j + 1) * std::numbers::pi / sites;
  }
  return ks;
}

ModeSet mode_set(const ChainSpec& spec) {
  spec.validate();
  ModeSet set;
  set.momenta = momenta(spec.sites);
  set.dtheta_dh.reserve(set.momenta.size());
  for (double k : set.momenta) set.dtheta_dh.push_back(dtheta_dh(k, spec.field));
  return set;
}

double dtheta_dh(double k, double h) { return 0.5 * std::sin(k) / (1.0 + h * h - 2.0 * h * std::cos(k)); }

double chi_f(int sites, double h) {
  require_field(h);
  const auto ks = momenta(sites);
  return parallel::chi_f_mode_sum(ks, h);
}

double chi_f_saturation(double h) {
  require_field(h);
  if (h == 1.0) throw AtCriticalPoint("chi_F/N diverges with N at h = 1; no saturation value");
  if (h < 1.0) return 1.0 / (16.0 * (1.0 - h * h));
  return 1.0 / (16.0 * h * h * (h * h - 1.0));
}

HermitianMatrix mode_hamiltonian(double k, double h) {
  const double z = 2.0 * (h - std::cos(k));
  const double x = 2.0 * std::sin(k);
  return HermitianMatrix(2, {z, x, x, -z});
}

double chi_f_from_modes(int sites, double h) {
  require_field(h);
  const auto ks = momenta(sites);
  const HermitianMatrix dh = 2.0 * pauli_z();  // dH_k/dh
  std::vector<cplx> tmp(2);
  double sum = 0.0;
  for (double k : ks) {
    const auto dec = eigh(mode_hamiltonian(k, h));
    apply_matrix(dh, dec.state(0), tmp);
    const double elem = std::norm(inner(dec.state(1), tmp));
    const double gap = dec.omega(1, 0);
    sum += elem / (gap * gap);
  }
  return sum;
}

double default_sweep_dt(double h_start, double h_end, double tau0) {
  const double span = std::abs(h_start - h_end);
  if (span == 0.0) return 0.01;
  return std::min(0.01, 0.01 * tau0 / span);
}

ModeAmplitude sweep_mode(double k, double h_start, double h_end, double tau0, double dt) {
  require_field(h_start);
  require_field(h_end);
  if (!(k > 0.0 && k < std::numbers::pi)) throw InvalidArgument("mode momentum must lie in (0, pi)");
  if (!(tau0 > 0.0)) throw InvalidArgument("sweep duration scale tau0 must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("sweep step dt must be positive");

  const double rate = (h_end >= h_start ? 1.0 : -1.0) / tau0;
  const double total = std::abs(h_end - h_start) * tau0;
  const ModeRampSource source(k, h_start, rate);
  auto psi = evolve(source, mode_ground_state(k, h_start), 0.0, total, dt);
  return {k, psi[0], psi[1]};
}

double lz_mode_sweep(double k, double h_start, double h_end, double tau0, double dt) {
  const auto amp = sweep_mode(k, h_start, h_end, tau0, dt);
  const auto gs = mode_ground_state(k, h_end);
  const std::vector<cplx> psi{amp.u, amp.v};
  const double overlap2 = std::norm(inner(gs.amplitudes(), psi));
  return std::clamp(1.0 - overlap2, 0.0, 1.0);
}

double landau_zener_excitation(double k, double tau0) { return std::exp(-2.0 * std::numbers::pi * tau0 * k * k); }

double fidelity_from_excitations(std::span<const double> excitation) {
  double f = 1.0;
  for (double p : excitation) f *= std::sqrt(std::max(0.0, 1.0 - p));
  return f;
}

double quench_ground_fidelity(int sites, double h_start, double h_end, double tau0, double dt) {
  const auto ks = momenta(sites);
  std::vector<double> p(ks.size());
  parallel::sweep_modes(ks, {h_start, h_end, tau0, dt}, p);
  return fidelity_from_excitations(p);
}

}  // namespace adlab::ising
