// Test helpers: seeded random matrices and brute-force spin operators built
// from explicit Kronecker products (independent of the library builders).

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "adlab/numkernel.hpp"

namespace adlab::test {

inline HermitianMatrix random_hermitian(std::size_t n, std::uint64_t seed, bool real = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = u(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v{u(rng), real ? 0.0 : u(rng)};
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

inline StateVector random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> a(n);
  for (auto& v : a) v = {u(rng), u(rng)};
  return StateVector(std::move(a));
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  HermitianMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l) out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return out;
}

/// Dense product of two square matrices (results are not necessarily Hermitian).
inline HermitianMatrix matmul(const HermitianMatrix& a, const HermitianMatrix& b) {
  const std::size_t n = a.dim();
  HermitianMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

/// Single-site operator op on site `site` of an n-site chain.
inline HermitianMatrix site_op(const HermitianMatrix& op, int site, int n) {
  HermitianMatrix out = HermitianMatrix::identity(1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? op : HermitianMatrix::identity(2));
  return out;
}

/// -sum_j sx_j sx_{j+1} - h sum_j sz_j on a ring.
inline HermitianMatrix brute_ising(int n, double h) {
  const std::size_t dim = std::size_t{1} << n;
  HermitianMatrix out(dim);
  for (int j = 0; j < n; ++j) {
    out += -1.0 * matmul(site_op(pauli_x(), j, n), site_op(pauli_x(), (j + 1) % n, n));
    out += -h * site_op(pauli_z(), j, n);
  }
  return out;
}

/// Total spin component S_a = (1/2) sum_i sigma^a_i.
inline HermitianMatrix total_spin(const HermitianMatrix& pauli, int n) {
  HermitianMatrix out(std::size_t{1} << n);
  for (int i = 0; i < n; ++i) out += 0.5 * site_op(pauli, i, n);
  return out;
}

inline double max_abs_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace adlab::test
