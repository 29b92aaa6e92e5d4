// Serial reference vs OpenMP kernels. Usage: adlab_bench [repeats]

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>

#include "adlab/ising_ff.hpp"
#include "adlab/kernels.hpp"

using namespace adlab;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

HermitianMatrix random_matrix(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = u(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = {u(rng), u(rng)};
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
  std::cout << std::left << std::setw(28) << name << std::right << std::setw(12) << std::setprecision(4)
            << serial_s * 1e3 << std::setw(12) << parallel_s * 1e3 << std::setw(10) << std::setprecision(3)
            << serial_s / parallel_s << "x" << (identical ? "" : "  MISMATCH") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
  std::cout << "threads: " << parallel::max_threads() << ", best of " << repeats << '\n';
  std::cout << std::left << std::setw(28) << "kernel" << std::right << std::setw(12) << "serial ms" << std::setw(12)
            << "omp ms" << std::setw(11) << "speedup" << '\n';

  {
    const auto k = ising::momenta(1 << 20);
    double a = 0.0, b = 0.0;
    const double ts = best_of(repeats, [&] { a = serial::chi_f_mode_sum(k, 1.0); });
    const double tp = best_of(repeats, [&] { b = parallel::chi_f_mode_sum(k, 1.0); });
    report("chi_f_mode_sum N=2^20", ts, tp, a == b);
  }
  {
    const std::size_t n = 1024;
    const auto h = random_matrix(n);
    std::vector<cplx> in(n, cplx{1.0, 0.5}), a(n), b(n);
    const double ts = best_of(repeats, [&] { serial::matvec(h, in, a); });
    const double tp = best_of(repeats, [&] { parallel::matvec(h, in, b); });
    report("matvec dim=1024", ts, tp, a == b);
  }
  {
    const std::size_t n = 512;
    const auto dec = eigh(random_matrix(n));
    std::vector<cplx> v(n, cplx{0.3, -0.1}), a(n), b(n);
    const double ts = best_of(repeats, [&] { serial::project(dec, v, a); });
    const double tp = best_of(repeats, [&] { parallel::project(dec, v, b); });
    report("project dim=512", ts, tp, a == b);
  }
  {
    const auto k = ising::momenta(256);
    const ModeSweepParams p{3.0, 0.0, 20.0, 0.01};
    std::vector<double> a(k.size()), b(k.size());
    const double ts = best_of(repeats, [&] { serial::sweep_modes(k, p, a); });
    const double tp = best_of(repeats, [&] { parallel::sweep_modes(k, p, b); });
    report("sweep_modes N=256 tau0=20", ts, tp, a == b);
  }
  return 0;
}
