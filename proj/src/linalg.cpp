#include "sdls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "sdls/errors.hpp"

namespace sdls {

namespace {
// below this many nonzeros (or matrix entries) the parallel kernels stay serial
constexpr index_t kParallelGrain = 16384;
}  // namespace

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

bool all_finite(const Vector& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix::Matrix(index_t rows, index_t cols, double value)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), value) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

Matrix Matrix::identity(index_t n) {
  Matrix m(n, n, 0.0);
  for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SparseMatrix::SparseMatrix(index_t nrows, index_t ncols, std::vector<Triplet> entries)
    : nrows_(nrows), ncols_(ncols) {
  if (nrows < 0 || ncols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw std::invalid_argument("SparseMatrix: entry (" + std::to_string(t.row) + "," +
                                  std::to_string(t.col) + ") outside " + std::to_string(nrows) +
                                  "x" + std::to_string(ncols));
    if (!std::isfinite(t.value))
      throw std::invalid_argument("SparseMatrix: non-finite value at (" + std::to_string(t.row) +
                                  "," + std::to_string(t.col) + ")");
  }

  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  triplets_.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!triplets_.empty() && triplets_.back().row == t.row && triplets_.back().col == t.col)
      triplets_.back().value += t.value;  // duplicates are summed
    else
      triplets_.push_back(t);
  }

  const index_t nz = nnz();
  row_ptr_.assign(nrows_ + 1, 0);
  csr_cols_.resize(nz);
  csr_vals_.resize(nz);
  for (const Triplet& t : triplets_) ++row_ptr_[t.row + 1];
  for (index_t i = 0; i < nrows_; ++i) row_ptr_[i + 1] += row_ptr_[i];
  for (index_t k = 0; k < nz; ++k) {
    csr_cols_[k] = triplets_[k].col;
    csr_vals_[k] = triplets_[k].value;
  }

  // counting sort by column; scanning row-major order keeps rows sorted
  // inside each column
  col_ptr_.assign(ncols_ + 1, 0);
  csc_rows_.resize(nz);
  csc_vals_.resize(nz);
  for (const Triplet& t : triplets_) ++col_ptr_[t.col + 1];
  for (index_t j = 0; j < ncols_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  std::vector<index_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (const Triplet& t : triplets_) {
    const index_t k = cursor[t.col]++;
    csc_rows_[k] = t.row;
    csc_vals_[k] = t.value;
  }
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  if (!std::isfinite(factor)) throw std::invalid_argument("SparseMatrix::scaled: non-finite factor");
  std::vector<Triplet> entries = triplets_;
  for (Triplet& t : entries) t.value *= factor;
  return SparseMatrix(nrows_, ncols_, std::move(entries));
}

Vector matvec(const SparseMatrix& A, const Vector& v) {
  if (static_cast<index_t>(v.size()) != A.ncols())
    throw std::invalid_argument("matvec: vector length " + std::to_string(v.size()) +
                                " does not match ncols " + std::to_string(A.ncols()));
  const index_t m = A.nrows();
  Vector out(m);
  const auto& rp = A.row_ptr();
  const auto& cols = A.csr_cols();
  const auto& vals = A.csr_vals();
#pragma omp parallel for schedule(static) if (A.nnz() >= kParallelGrain)
  for (index_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (index_t k = rp[i]; k < rp[i + 1]; ++k) s += vals[k] * v[cols[k]];
    out[i] = s;
  }
  return out;
}

Vector matvec_serial(const SparseMatrix& A, const Vector& v) {
  if (static_cast<index_t>(v.size()) != A.ncols())
    throw std::invalid_argument("matvec: vector length " + std::to_string(v.size()) +
                                " does not match ncols " + std::to_string(A.ncols()));
  const index_t m = A.nrows();
  Vector out(m);
  const auto& rp = A.row_ptr();
  const auto& cols = A.csr_cols();
  const auto& vals = A.csr_vals();
  for (index_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (index_t k = rp[i]; k < rp[i + 1]; ++k) s += vals[k] * v[cols[k]];
    out[i] = s;
  }
  return out;
}

Vector matvec_transpose(const SparseMatrix& A, const Vector& w) {
  if (static_cast<index_t>(w.size()) != A.nrows())
    throw std::invalid_argument("matvec_transpose: vector length " + std::to_string(w.size()) +
                                " does not match nrows " + std::to_string(A.nrows()));
  const index_t n = A.ncols();
  Vector out(n);
  const auto& cp = A.col_ptr();
  const auto& rows = A.csc_rows();
  const auto& vals = A.csc_vals();
#pragma omp parallel for schedule(static) if (A.nnz() >= kParallelGrain)
  for (index_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (index_t k = cp[j]; k < cp[j + 1]; ++k) s += vals[k] * w[rows[k]];
    out[j] = s;
  }
  return out;
}

Vector matvec_transpose_serial(const SparseMatrix& A, const Vector& w) {
  if (static_cast<index_t>(w.size()) != A.nrows())
    throw std::invalid_argument("matvec_transpose: vector length " + std::to_string(w.size()) +
                                " does not match nrows " + std::to_string(A.nrows()));
  const index_t n = A.ncols();
  Vector out(n);
  const auto& cp = A.col_ptr();
  const auto& rows = A.csc_rows();
  const auto& vals = A.csc_vals();
  for (index_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (index_t k = cp[j]; k < cp[j + 1]; ++k) s += vals[k] * w[rows[k]];
    out[j] = s;
  }
  return out;
}

Vector dense_matvec(const Matrix& M, const Vector& v) {
  if (static_cast<index_t>(v.size()) != M.cols())
    throw std::invalid_argument("dense_matvec: length mismatch");
  const index_t m = M.rows();
  const index_t n = M.cols();
  Vector out(m);
#pragma omp parallel for schedule(static) if (m * n >= kParallelGrain)
  for (index_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (index_t j = 0; j < n; ++j) s += M(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Vector dense_matvec_serial(const Matrix& M, const Vector& v) {
  if (static_cast<index_t>(v.size()) != M.cols())
    throw std::invalid_argument("dense_matvec: length mismatch");
  const index_t m = M.rows();
  const index_t n = M.cols();
  Vector out(m);
  for (index_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (index_t j = 0; j < n; ++j) s += M(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

SymEig sym_eig(const Matrix& S) {
  if (S.rows() != S.cols())
    throw std::invalid_argument("sym_eig: matrix is " + std::to_string(S.rows()) + "x" +
                                std::to_string(S.cols()) + ", not square");
  const index_t n = S.rows();
  if (n == 0) return SymEig{};

  double max_abs = 0.0;
  double max_asym = 0.0;
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < n; ++i) {
      max_abs = std::max(max_abs, std::abs(S(i, j)));
      max_asym = std::max(max_asym, std::abs(S(i, j) - S(j, i)));
    }
  if (!std::isfinite(max_abs)) throw std::invalid_argument("sym_eig: non-finite entries");
  if (max_asym > 1e-12 * std::max(1.0, max_abs))
    throw std::invalid_argument("sym_eig: matrix is not symmetric (max asymmetry " +
                                std::to_string(max_asym) + ")");

  SymEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < n; ++i) out.eigenvectors(i, j) = 0.5 * (S(i, j) + S(j, i));

  const lapack_int info =
      LAPACKE_dsyev(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                    out.eigenvectors.data(), static_cast<lapack_int>(n), out.eigenvalues.data());
  if (info > 0) throw NumericalError("sym_eig: eigensolver failed to converge");
  if (info < 0) throw std::invalid_argument("sym_eig: bad argument to dsyev");
  return out;
}

}  // namespace sdls
