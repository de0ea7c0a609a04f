#pragma once

#include <random>

#include "sdls/cone.hpp"
#include "sdls/linalg.hpp"

namespace testutil {

using sdls::index_t;
using sdls::Matrix;
using sdls::SparseMatrix;
using sdls::Triplet;
using sdls::Vector;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vector random_vector(std::mt19937_64& g, index_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (double& x : v) x = u(g);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& g, index_t rows, index_t cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix M(rows, cols);
  for (index_t j = 0; j < cols; ++j)
    for (index_t i = 0; i < rows; ++i) M(i, j) = u(g);
  return M;
}

inline Matrix random_symmetric(std::mt19937_64& g, index_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix M(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i <= j; ++i) M(i, j) = M(j, i) = u(g);
  return M;
}

/// Dense random matrix in sparse form; every entry filled, so row rank is
/// full with probability one when rows <= cols.
inline SparseMatrix random_dense_sparse(std::mt19937_64& g, index_t rows, index_t cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> entries;
  entries.reserve(rows * cols);
  for (index_t i = 0; i < rows; ++i)
    for (index_t j = 0; j < cols; ++j) entries.push_back({i, j, u(g)});
  return SparseMatrix(rows, cols, entries);
}

inline SparseMatrix to_sparse(const Matrix& M) {
  std::vector<Triplet> entries;
  for (index_t i = 0; i < M.rows(); ++i)
    for (index_t j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) entries.push_back({i, j, M(i, j)});
  return SparseMatrix(M.rows(), M.cols(), entries);
}

/// Random cone mixing all block kinds, sized to its total dimension.
inline sdls::ConeSpec random_cone(std::mt19937_64& g, index_t max_free = 4,
                                  index_t max_nonneg = 6, index_t max_soc = 2,
                                  index_t max_psd = 2) {
  std::uniform_int_distribution<index_t> df(0, max_free), dl(0, max_nonneg);
  std::uniform_int_distribution<index_t> nq(0, max_soc), ns(0, max_psd);
  std::uniform_int_distribution<index_t> dq(2, 5), ds(2, 3);
  sdls::ConeSpec K;
  K.n_free = df(g);
  K.n_nonneg = dl(g);
  const index_t q = nq(g), s = ns(g);
  for (index_t i = 0; i < q; ++i) K.soc_dims.push_back(dq(g));
  for (index_t i = 0; i < s; ++i) K.psd_dims.push_back(ds(g));
  if (K.total_dim() == 0) K.n_nonneg = 1;
  return K;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double d = a.size() == b.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testutil
