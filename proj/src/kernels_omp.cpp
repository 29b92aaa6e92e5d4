#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adlab/ising_ff.hpp"
#include "adlab/kernels.hpp"

namespace adlab::parallel {
namespace {

// Below this many rows a parallel region costs more than it saves.
constexpr std::ptrdiff_t kMinParallelRows = 128;

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

double chi_f_mode_sum(std::span<const double> momenta, double h) {
  const auto n = static_cast<std::ptrdiff_t>(momenta.size());
  std::vector<double> terms(momenta.size());
#pragma omp parallel for schedule(static) if (n >= 4 * kMinParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double d = ising::dtheta_dh(momenta[i], h);
    terms[i] = d * d;
  }
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

void matvec(const HermitianMatrix& h, std::span<const cplx> in, std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(h.dim());
#pragma omp parallel for schedule(static) if (n >= kMinParallelRows)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = h.row(static_cast<std::size_t>(i));
    cplx s{};
    for (std::ptrdiff_t j = 0; j < n; ++j) s += row[j] * in[j];
    out[i] = s;
  }
}

void project(const SpectralDecomposition& dec, std::span<const cplx> v, std::span<cplx> coeffs) {
  const auto n = static_cast<std::ptrdiff_t>(dec.dim());
#pragma omp parallel for schedule(static) if (n >= kMinParallelRows)
  for (std::ptrdiff_t m = 0; m < n; ++m) coeffs[m] = inner(dec.state(static_cast<std::size_t>(m)), v);
}

void sweep_modes(std::span<const double> momenta, const ModeSweepParams& params, std::span<double> excitation) {
  const auto n = static_cast<std::ptrdiff_t>(momenta.size());
  // Exceptions must not escape a parallel region; keep the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      excitation[i] = ising::lz_mode_sweep(momenta[i], params.h_start, params.h_end, params.tau0, params.dt);
    } catch (...) {
#pragma omp critical(adlab_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace adlab::parallel
