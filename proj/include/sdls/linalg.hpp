#pragma once

#include <cstdint>
#include <vector>

namespace sdls {

using index_t = std::int64_t;
using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
bool all_finite(const Vector& a);

/// Dense column-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(index_t rows, index_t cols, double value = 0.0);
  static Matrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  double& operator()(index_t i, index_t j) { return data_[j * rows_ + i]; }
  double operator()(index_t i, index_t j) const { return data_[j * rows_ + i]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Sparse matrix stored as coordinate triplets, compiled to compressed
/// row and column forms at construction so that repeated products with
/// A and its transpose run on contiguous arrays.
///
/// Duplicate (row, col) entries are summed. All values must be finite.
class SparseMatrix {
 public:
  SparseMatrix(index_t nrows, index_t ncols, std::vector<Triplet> entries);

  index_t nrows() const { return nrows_; }
  index_t ncols() const { return ncols_; }
  index_t nnz() const { return static_cast<index_t>(triplets_.size()); }

  /// Canonical (row-major sorted, duplicate-free) triplets.
  const std::vector<Triplet>& triplets() const { return triplets_; }

  /// Copy of this matrix with every value multiplied by factor.
  SparseMatrix scaled(double factor) const;

  // compressed forms, used by the product kernels
  const std::vector<index_t>& row_ptr() const { return row_ptr_; }
  const std::vector<index_t>& csr_cols() const { return csr_cols_; }
  const std::vector<double>& csr_vals() const { return csr_vals_; }
  const std::vector<index_t>& col_ptr() const { return col_ptr_; }
  const std::vector<index_t>& csc_rows() const { return csc_rows_; }
  const std::vector<double>& csc_vals() const { return csc_vals_; }

 private:
  index_t nrows_ = 0;
  index_t ncols_ = 0;
  std::vector<Triplet> triplets_;
  std::vector<index_t> row_ptr_, csr_cols_;
  std::vector<double> csr_vals_;
  std::vector<index_t> col_ptr_, csc_rows_;
  std::vector<double> csc_vals_;
};

// Kernels come in pairs: the default entry point parallelizes rows (or
// columns) with OpenMP above a grain size, the _serial twin is the plain
// loop kept as the reference. Both produce bitwise-identical results:
// every output element is accumulated in the same order.

Vector matvec(const SparseMatrix& A, const Vector& v);
Vector matvec_serial(const SparseMatrix& A, const Vector& v);

Vector matvec_transpose(const SparseMatrix& A, const Vector& w);
Vector matvec_transpose_serial(const SparseMatrix& A, const Vector& w);

Vector dense_matvec(const Matrix& M, const Vector& v);
Vector dense_matvec_serial(const Matrix& M, const Vector& v);

struct SymEig {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, same order
};

/// Eigendecomposition of a symmetric matrix. The input must be symmetric
/// to within 1e-12 relative tolerance; it is symmetrized before the
/// decomposition.
SymEig sym_eig(const Matrix& S);

}  // namespace sdls
