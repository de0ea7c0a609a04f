#pragma once

#include <vector>

#include "sdls/linalg.hpp"

namespace sdls {

enum class BlockKind { Free, Nonneg, Soc, Psd };

struct BlockView {
  BlockKind kind;
  index_t offset;      // start position in the flat vector
  index_t dim;         // length in the flat vector (matrix_dim^2 for psd)
  index_t matrix_dim;  // side length for psd blocks, 0 otherwise
};

/// Product cone in the standard layout: free components first, then the
/// nonnegative ones, then second-order blocks, then semidefinite blocks.
/// Semidefinite blocks occupy matrix_dim^2 consecutive entries holding the
/// full matrix in column-major order, so the flat Euclidean norm equals
/// the Frobenius norm.
struct ConeSpec {
  index_t n_free = 0;
  index_t n_nonneg = 0;
  std::vector<index_t> soc_dims;
  std::vector<index_t> psd_dims;

  index_t total_dim() const;
  static ConeSpec all_free(index_t n) { return ConeSpec{n, 0, {}, {}}; }
};

/// Throws ConeDimensionError unless total_dim(K) == n and every listed
/// block dimension is at least 1.
void validate(const ConeSpec& K, index_t n);

/// Partition of [0, total_dim) into blocks, in layout order.
std::vector<BlockView> blocks(const ConeSpec& K);

/// Orthogonal projection onto the cone, computed block by block:
/// identity on free components, componentwise clamp on nonnegative ones,
/// the closed-form Lorentz projection on second-order blocks, and an
/// eigenvalue clamp of the symmetrized matrix on semidefinite blocks.
/// Blocks are independent; the default entry point runs them in parallel.
Vector project(const ConeSpec& K, const Vector& z);
Vector project_serial(const ConeSpec& K, const Vector& z);

/// Smallest cone margin over all blocks: min entry of nonnegative blocks,
/// t - ||xbar|| for second-order blocks, the smallest eigenvalue of the
/// symmetrized matrix for semidefinite blocks. Free blocks do not
/// contribute; a cone with only free blocks has margin +inf. A value
/// >= -tol certifies approximate membership.
double membership_margin(const ConeSpec& K, const Vector& x);

}  // namespace sdls
