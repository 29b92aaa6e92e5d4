// Reference loops. Kept deliberately plain: the OpenMP variants in
// kernels_omp.cpp are tested against these.

#include "adlab/ising_ff.hpp"
#include "adlab/kernels.hpp"

namespace adlab::serial {

double chi_f_mode_sum(std::span<const double> momenta, double h) {
  double sum = 0.0;
  for (double k : momenta) {
    const double d = ising::dtheta_dh(k, h);
    sum += d * d;
  }
  return sum;
}

void matvec(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = h.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = h.row(i);
    cplx s{};
    for (std::size_t j = 0; j < n; ++j) s += row[j] * in[j];
    out[i] = s;
  }
}

void project(const SpectralDecomposition& dec, std::span<const cplx> v, std::span<cplx> coeffs) {
  for (std::size_t n = 0; n < dec.dim(); ++n) coeffs[n] = inner(dec.state(n), v);
}

void sweep_modes(std::span<const double> momenta, const ModeSweepParams& params, std::span<double> excitation) {
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    excitation[i] = ising::lz_mode_sweep(momenta[i], params.h_start, params.h_end, params.tau0, params.dt);
  }
}

}  // namespace adlab::serial
