// kernels.hpp - data-parallel inner loops.
//
// Every kernel exists twice with identical signatures: adlab::serial holds the
// straightforward reference loops, adlab::parallel the OpenMP versions used by
// the library. Reductions in the parallel versions fill a per-item buffer and
// sum it serially in index order, so both variants return bit-identical
// results for any thread count.

#pragma once

#include <span>
#include <vector>

#include "adlab/numkernel.hpp"

namespace adlab {

/// Parameters for a linear field sweep of independent two-level modes.
struct ModeSweepParams {
  double h_start = 0.0;
  double h_end = 0.0;
  double tau0 = 1.0;  // sweep rate is 1/tau0 in field units per time unit
  double dt = 0.01;
};

namespace serial {

/// sum_k (dtheta_k/dh)^2 over the given momenta.
double chi_f_mode_sum(std::span<const double> momenta, double h);
/// out = H in for a dense Hermitian H.
void matvec(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out);
/// coeffs[n] = <phi_n | v>.
void project(const SpectralDecomposition& dec, std::span<const cplx> v, std::span<cplx> coeffs);
/// Excitation probability p_k of every mode after a linear sweep.
void sweep_modes(std::span<const double> momenta, const ModeSweepParams& params, std::span<double> excitation);

}  // namespace serial

namespace parallel {

double chi_f_mode_sum(std::span<const double> momenta, double h);
void matvec(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out);
void project(const SpectralDecomposition& dec, std::span<const cplx> v, std::span<cplx> coeffs);
void sweep_modes(std::span<const double> momenta, const ModeSweepParams& params, std::span<double> excitation);

/// Number of OpenMP threads the parallel kernels will use; 1 without OpenMP.
int max_threads();
void set_threads(int n);

}  // namespace parallel

}  // namespace adlab
