// Dense Hermitian eigensolver: Householder reduction to real symmetric
// tridiagonal form (LAPACK hetd2 convention, real off-diagonal), explicit
// accumulation of the reflectors, then implicit QL with Wilkinson-type shifts
// (EISPACK tql2) applied directly to the accumulated basis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "adlab/numkernel.hpp"

namespace adlab {
namespace {

constexpr double kPhaseTol = 1e-10;

inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const cplx& x) { return x.real(); }
inline double imag_of(double) { return 0.0; }
inline double imag_of(const cplx& x) { return x.imag(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }

template <class T>
struct Reflector {
  T tau{};
  std::vector<T> v;  // v[0] = 1
};

// Generates H = I - tau v v^H with H^H [alpha; x] = [beta; 0], beta real.
template <class T>
Reflector<T> make_reflector(T alpha, std::span<const T> x, double& beta) {
  Reflector<T> r;
  r.v.assign(x.size() + 1, T{});
  r.v[0] = T{1};
  double xnorm2 = 0.0;
  for (const auto& xi : x) xnorm2 += abs2(xi);
  if (xnorm2 == 0.0 && imag_of(alpha) == 0.0) {
    r.tau = T{};
    beta = real_of(alpha);
    return r;
  }
  beta = -std::copysign(std::sqrt(abs2(alpha) + xnorm2), real_of(alpha));
  r.tau = (T(beta) - alpha) / T(beta);
  const T scale = T{1} / (alpha - T(beta));
  for (std::size_t i = 0; i < x.size(); ++i) r.v[i + 1] = x[i] * scale;
  return r;
}

// Reduces the n x n Hermitian matrix a (row-major, overwritten) to tridiagonal
// form d/e and returns Q^T (row j = column j of Q) with A = Q T Q^H.
template <class T>
std::vector<T> tridiagonalize(std::vector<T>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<Reflector<T>> reflectors;
  reflectors.reserve(n > 1 ? n - 1 : 0);
  std::vector<T> col, p;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing block starts at k+1
    col.resize(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = a[(k + 1 + i) * n + k];
    double beta = 0.0;
    auto r = make_reflector<T>(col[0], std::span<const T>(col).subspan(1), beta);
    d[k] = real_of(a[k * n + k]);
    e[k] = beta;
    if (r.tau != T{}) {
      const auto& v = r.v;
      p.assign(m, T{});
      // p = tau A_sub v
      for (std::size_t i = 0; i < m; ++i) {
        const T* row = &a[(k + 1 + i) * n + (k + 1)];
        T s{};
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        p[i] = r.tau * s;
      }
      // w = p - 1/2 tau (p^H v) v
      T pv{};
      for (std::size_t i = 0; i < m; ++i) pv += conj_of(p[i]) * v[i];
      const T c = T(-0.5) * r.tau * pv;
      for (std::size_t i = 0; i < m; ++i) p[i] += c * v[i];
      // A_sub -= v w^H + w v^H
      for (std::size_t i = 0; i < m; ++i) {
        T* row = &a[(k + 1 + i) * n + (k + 1)];
        const T vi = v[i];
        const T wi = p[i];
        for (std::size_t j = 0; j < m; ++j) row[j] -= vi * conj_of(p[j]) + wi * conj_of(v[j]);
      }
    }
    reflectors.push_back(std::move(r));
  }
  d[n - 1] = real_of(a[(n - 1) * n + (n - 1)]);

  // Q = H_0 H_1 ... H_{n-2}, accumulated backwards on rows/cols k+1..n-1.
  std::vector<T> q(n * n, T{});
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = T{1};
  std::vector<T> y;
  for (std::size_t kk = reflectors.size(); kk-- > 0;) {
    const auto& r = reflectors[kk];
    if (r.tau == T{}) continue;
    const std::size_t off = kk + 1;
    const std::size_t m = n - off;
    y.assign(m, T{});
    for (std::size_t i = 0; i < m; ++i) {
      const T cv = conj_of(r.v[i]);
      const T* row = &q[(off + i) * n + off];
      for (std::size_t j = 0; j < m; ++j) y[j] += cv * row[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const T f = r.tau * r.v[i];
      T* row = &q[(off + i) * n + off];
      for (std::size_t j = 0; j < m; ++j) row[j] -= f * y[j];
    }
  }

  std::vector<T> qt(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qt[j * n + i] = q[i * n + j];
  return qt;
}

// Implicit QL on the symmetric tridiagonal (d, e) with e[i] = T(i+1, i).
// Rotations are applied to rows of zt, which on entry holds Q^T; on exit row
// i is the eigenvector belonging to d[i]. Eigenvalues are not yet sorted.
template <class T>
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<T>& zt, std::size_t n) {
  if (n == 1) return;
  e[n - 1] = 0.0;
  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  const int max_iter = 60;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter) throw NoConvergence("eigh: implicit QL did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          T* zi = &zt[i * n];
          T* zi1 = &zt[(i + 1) * n];
          for (std::size_t k = 0; k < n; ++k) {
            const T hk = zi1[k];
            zi1[k] = s * zi[k] + c * hk;
            zi[k] = c * zi[k] - s * hk;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

struct BlockResult {
  std::vector<double> energies;
  std::vector<cplx> vectors;  // row i = eigenvector i (block-local coordinates)
};

template <class T>
BlockResult solve_block(const HermitianMatrix& h, const std::vector<std::size_t>& idx) {
  const std::size_t n = idx.size();
  std::vector<T> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (std::is_same_v<T, double>) {
        a[i * n + j] = h(idx[i], idx[j]).real();
      } else {
        a[i * n + j] = h(idx[i], idx[j]);
      }
    }
  }
  std::vector<double> d, e;
  auto zt = tridiagonalize<T>(a, n, d, e);
  tql2<T>(d, e, zt, n);

  BlockResult out;
  out.energies = std::move(d);
  out.vectors.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) out.vectors[i] = cplx(zt[i]);
  return out;
}

// Connected components of the off-diagonal sparsity graph, each sorted.
std::vector<std::vector<std::size_t>> sparsity_blocks(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h(i, j) != cplx{} || h(j, i) != cplx{}) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (block_of[r] == n) {
      block_of[r] = blocks.size();
      blocks.emplace_back();
    }
    blocks[block_of[r]].push_back(i);
  }
  return blocks;
}

void fix_phase(std::span<cplx> v) {
  for (auto& c : v) {
    if (std::abs(c) > kPhaseTol) {
      const cplx phase = std::conj(c) / std::abs(c);
      for (auto& x : v) x *= phase;
      return;
    }
  }
}

}  // namespace

SpectralDecomposition eigh(const HermitianMatrix& h, const EighOptions& options) {
  const std::size_t n = h.dim();
  if (n == 0) throw InvalidArgument("eigh: empty matrix");
  if (n > options.dim_cap) {
    throw DimensionCap("eigh: dimension " + std::to_string(n) + " exceeds cap " + std::to_string(options.dim_cap));
  }
  const double defect = h.hermiticity_defect();
  if (defect > options.hermitian_tol) {
    throw NonHermitianInput("eigh: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }

  struct Pair {
    double energy;
    std::size_t block;
    std::size_t local;
  };
  const auto blocks = sparsity_blocks(h);
  std::vector<BlockResult> results;
  results.reserve(blocks.size());
  std::vector<Pair> order;
  order.reserve(n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bool real_block = true;
    for (auto i : blocks[b]) {
      for (auto j : blocks[b]) {
        if (h(i, j).imag() != 0.0) {
          real_block = false;
          break;
        }
      }
      if (!real_block) break;
    }
    results.push_back(real_block ? solve_block<double>(h, blocks[b]) : solve_block<cplx>(h, blocks[b]));
    for (std::size_t l = 0; l < blocks[b].size(); ++l) order.push_back({results.back().energies[l], b, l});
  }
  std::stable_sort(order.begin(), order.end(), [](const Pair& x, const Pair& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.block < y.block;
  });

  std::vector<double> energies(n);
  std::vector<cplx> states(n * n, cplx{});
  for (std::size_t k = 0; k < n; ++k) {
    const auto& pr = order[k];
    const auto& idx = blocks[pr.block];
    const auto& vecs = results[pr.block].vectors;
    const std::size_t bn = idx.size();
    energies[k] = pr.energy;
    cplx* dst = &states[k * n];
    for (std::size_t i = 0; i < bn; ++i) dst[idx[i]] = vecs[pr.local * bn + i];
    fix_phase(std::span<cplx>(dst, n));
  }
  return SpectralDecomposition(std::move(energies), std::move(states));
}

}  // namespace adlab
