#include "adlab/ed_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adlab/kernels.hpp"

namespace adlab::ed {
namespace {

void require_nondegenerate(const SpectralDecomposition& dec) {
  if (dec.dim() > 1 && dec.ground_gap() < kDegeneracyTol) {
    throw DegenerateGroundState("ground state is degenerate (splitting " + std::to_string(dec.ground_gap()) + ")");
  }
}

void validate_ising_sites(int sites) {
  if (sites % 2 != 0) throw OddSize("Ising ED needs even N, got " + std::to_string(sites));
  if (sites < kIsingMinSites || sites > kIsingMaxSites) {
    throw SizeCap("Ising ED supports " + std::to_string(kIsingMinSites) + " <= N <= " +
                  std::to_string(kIsingMaxSites) + ", got " + std::to_string(sites));
  }
}

void validate_lmg(int sites, double gamma) {
  if (sites < 1 || sites > kLmgMaxSites) {
    throw SizeCap("LMG sector build supports 1 <= N <= " + std::to_string(kLmgMaxSites) + ", got " +
                  std::to_string(sites));
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("LMG anisotropy gamma must lie in [0, 1)");
}

// (|H_I^{n0}|^2, omega_n0) for n >= 1.
struct Weights {
  std::vector<double> weight;
  std::vector<double> omega;
};

Weights excited_weights(const SpectralDecomposition& dec, const HermitianMatrix& driving) {
  require_nondegenerate(dec);
  const auto all = transition_weights(dec, driving);
  Weights w;
  w.weight.assign(all.begin() + 1, all.end());
  w.omega.reserve(dec.dim() - 1);
  for (std::size_t n = 1; n < dec.dim(); ++n) w.omega.push_back(dec.omega(n, 0));
  return w;
}

}  // namespace

void SpinModelSpec::validate() const {
  if (kind == ModelKind::Ising) {
    validate_ising_sites(sites);
  } else {
    if (sites < 2) throw SizeCap("LMG model needs N >= 2");
    validate_lmg(sites, gamma);
  }
}

PerturbationStep PerturbationStep::from_protocol(double lambda, double dlambda, double tau0, int subdivisions) {
  if (dlambda == 0.0) throw InvalidArgument("perturbation step needs dlambda != 0");
  return {lambda, dlambda, std::abs(dlambda) * tau0, subdivisions};
}

ModelFamily ising_family(int sites) {
  validate_ising_sites(sites);
  const std::size_t dim = std::size_t{1} << sites;
  HermitianMatrix base(dim);
  HermitianMatrix driving(dim);
  // Bit j set means spin j points down (sz = -1).
  for (std::size_t s = 0; s < dim; ++s) {
    double sz_sum = 0.0;
    for (int j = 0; j < sites; ++j) {
      sz_sum += ((s >> j) & 1U) ? -1.0 : 1.0;
      const int next = (j + 1) % sites;
      const std::size_t flipped = s ^ (std::size_t{1} << j) ^ (std::size_t{1} << next);
      base(flipped, s) -= 1.0;
    }
    driving(s, s) = -sz_sum;
  }
  return {std::move(base), std::move(driving)};
}

HermitianMatrix build_ising(int sites, double h) { return ising_family(sites).at(h); }

ModelFamily lmg_family(int sites, double gamma) {
  validate_lmg(sites, gamma);
  const double spin = 0.5 * sites;
  const std::size_t dim = static_cast<std::size_t>(sites) + 1;
  const double inv_n = 1.0 / sites;
  HermitianMatrix base(dim);
  HermitianMatrix driving(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double m = -spin + static_cast<double>(i);
    // Sx^2 + gamma Sy^2 = (1+gamma)/4 (S+S- + S-S+) + (1-gamma)/4 (S+^2 + S-^2)
    const double diag_pair = 0.5 * (1.0 + gamma) * (spin * (spin + 1.0) - m * m);
    base(i, i) = -2.0 * inv_n * diag_pair + 0.5 * (1.0 + gamma);
    driving(i, i) = -2.0 * m;
    if (i + 2 < dim) {
      const double amp = std::sqrt((spin - m) * (spin + m + 1.0) * (spin - m - 1.0) * (spin + m + 2.0));
      const double v = -2.0 * inv_n * 0.25 * (1.0 - gamma) * amp;
      if (v != 0.0) {
        base(i + 2, i) = v;
        base(i, i + 2) = v;
      }
    }
  }
  return {std::move(base), std::move(driving)};
}

HermitianMatrix build_lmg(int sites, double h, double gamma) { return lmg_family(sites, gamma).at(h); }

ModelFamily family_for(const SpinModelSpec& spec) {
  spec.validate();
  return spec.kind == ModelKind::Ising ? ising_family(spec.sites) : lmg_family(spec.sites, spec.gamma);
}

std::vector<double> transition_weights(const SpectralDecomposition& dec, const HermitianMatrix& driving) {
  if (driving.dim() != dec.dim()) throw InvalidArgument("driving operator dimension mismatch");
  std::vector<cplx> v(dec.dim());
  std::vector<cplx> coeffs(dec.dim());
  parallel::matvec(driving, dec.state(0), v);
  parallel::project(dec, v, coeffs);
  std::vector<double> w(dec.dim());
  for (std::size_t n = 0; n < dec.dim(); ++n) w[n] = std::norm(coeffs[n]);
  return w;
}

double chi_f_perturbative(const SpectralDecomposition& dec, const HermitianMatrix& driving) {
  const auto w = excited_weights(dec, driving);
  double sum = 0.0;
  for (std::size_t n = 0; n < w.weight.size(); ++n) sum += w.weight[n] / (w.omega[n] * w.omega[n]);
  return sum;
}

double ground_fidelity(const SpectralDecomposition& a, const SpectralDecomposition& b) {
  require_nondegenerate(a);
  require_nondegenerate(b);
  if (a.dim() != b.dim()) throw InvalidArgument("ground_fidelity: dimension mismatch");
  return std::min(1.0, std::abs(inner(a.state(0), b.state(0))));
}

double chi_f_finite_difference(const ModelFamily& family, double lambda, double dlambda) {
  if (dlambda == 0.0) throw InvalidArgument("finite difference needs dlambda != 0");
  const auto a = eigh(family.at(lambda));
  const auto b = eigh(family.at(lambda + dlambda));
  return 2.0 * (1.0 - ground_fidelity(a, b)) / (dlambda * dlambda);
}

FiniteDifferenceEstimate chi_f_finite_difference_checked(const ModelFamily& family, double lambda, double dlambda,
                                                         double rel_tol) {
  FiniteDifferenceEstimate est;
  est.value = chi_f_finite_difference(family, lambda, dlambda);
  est.half_step = chi_f_finite_difference(family, lambda, 0.5 * dlambda);
  est.extrapolated = 2.0 * est.half_step - est.value;
  const double scale = std::max(std::abs(est.half_step), 1e-300);
  est.converged = std::abs(est.value - est.half_step) <= rel_tol * scale;
  return est;
}

double loschmidt_F1(const SpectralDecomposition& dec, const HermitianMatrix& driving, double dlambda, double dt) {
  const auto w = excited_weights(dec, driving);
  double sum = 0.0;
  for (std::size_t n = 0; n < w.weight.size(); ++n) {
    const double om = w.omega[n];
    sum += w.weight[n] * (1.0 - std::cos(om * dt)) / (om * om);
  }
  return 1.0 - dlambda * dlambda * sum;
}

double lower_bound_F2(const SpectralDecomposition& dec, const HermitianMatrix& driving, double dlambda) {
  return 1.0 - 0.5 * dlambda * dlambda * chi_f_perturbative(dec, driving);
}

}  // namespace adlab::ed
