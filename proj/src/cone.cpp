#include "sdls/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sdls/errors.hpp"

namespace sdls {

namespace {
constexpr index_t kParallelGrain = 16384;

void check_length(const ConeSpec& K, const Vector& z, const char* who) {
  const index_t n = K.total_dim();
  if (static_cast<index_t>(z.size()) != n)
    throw std::invalid_argument(std::string(who) + ": vector length " +
                                std::to_string(z.size()) + " does not match cone dimension " +
                                std::to_string(n));
}

Matrix symmetrized_block(const double* x, index_t m) {
  Matrix Z(m, m);
  for (index_t j = 0; j < m; ++j)
    for (index_t i = 0; i < m; ++i) Z(i, j) = 0.5 * (x[j * m + i] + x[i * m + j]);
  return Z;
}

void project_block(const BlockView& blk, const double* z, double* out) {
  const double* zi = z + blk.offset;
  double* oi = out + blk.offset;
  switch (blk.kind) {
    case BlockKind::Free:
      std::copy(zi, zi + blk.dim, oi);
      break;
    case BlockKind::Nonneg:
      for (index_t i = 0; i < blk.dim; ++i) oi[i] = std::max(zi[i], 0.0);
      break;
    case BlockKind::Soc: {
      const double t = zi[0];
      double sq = 0.0;
      for (index_t i = 1; i < blk.dim; ++i) sq += zi[i] * zi[i];
      const double xnorm = std::sqrt(sq);
      if (xnorm <= t) {
        std::copy(zi, zi + blk.dim, oi);
      } else if (xnorm <= -t) {
        std::fill(oi, oi + blk.dim, 0.0);
      } else {
        const double coef = 0.5 * (t + xnorm);
        oi[0] = coef;
        for (index_t i = 1; i < blk.dim; ++i) oi[i] = coef * zi[i] / xnorm;
      }
      break;
    }
    case BlockKind::Psd: {
      const index_t m = blk.matrix_dim;
      const SymEig eig = sym_eig(symmetrized_block(zi, m));
      Matrix X(m, m, 0.0);
      for (index_t k = 0; k < m; ++k) {
        const double lam = eig.eigenvalues[k];
        if (lam <= 0.0) continue;  // clamp threshold is exactly zero
        for (index_t j = 0; j < m; ++j) {
          const double w = lam * eig.eigenvectors(j, k);
          for (index_t i = 0; i < m; ++i) X(i, j) += eig.eigenvectors(i, k) * w;
        }
      }
      std::copy(X.data(), X.data() + m * m, oi);
      break;
    }
  }
}

double block_margin(const BlockView& blk, const double* x) {
  const double* xi = x + blk.offset;
  switch (blk.kind) {
    case BlockKind::Free:
      return std::numeric_limits<double>::infinity();
    case BlockKind::Nonneg: {
      double m = std::numeric_limits<double>::infinity();
      for (index_t i = 0; i < blk.dim; ++i) m = std::min(m, xi[i]);
      return m;
    }
    case BlockKind::Soc: {
      double sq = 0.0;
      for (index_t i = 1; i < blk.dim; ++i) sq += xi[i] * xi[i];
      return xi[0] - std::sqrt(sq);
    }
    case BlockKind::Psd: {
      const SymEig eig = sym_eig(symmetrized_block(xi, blk.matrix_dim));
      return eig.eigenvalues.front();
    }
  }
  return 0.0;  // unreachable
}
}  // namespace

index_t ConeSpec::total_dim() const {
  index_t n = n_free + n_nonneg;
  for (index_t q : soc_dims) n += q;
  for (index_t s : psd_dims) n += s * s;
  return n;
}

void validate(const ConeSpec& K, index_t n) {
  if (K.n_free < 0 || K.n_nonneg < 0)
    throw ConeDimensionError("cone: negative block count");
  for (index_t q : K.soc_dims)
    if (q < 1) throw ConeDimensionError("cone: second-order block dimension " +
                                        std::to_string(q) + " < 1");
  for (index_t s : K.psd_dims)
    if (s < 1) throw ConeDimensionError("cone: semidefinite block dimension " +
                                        std::to_string(s) + " < 1");
  const index_t total = K.total_dim();
  if (total != n)
    throw ConeDimensionError("K dims sum " + std::to_string(total) + " != n=" + std::to_string(n));
}

std::vector<BlockView> blocks(const ConeSpec& K) {
  std::vector<BlockView> out;
  index_t pos = 0;
  if (K.n_free > 0) {
    out.push_back({BlockKind::Free, pos, K.n_free, 0});
    pos += K.n_free;
  }
  if (K.n_nonneg > 0) {
    out.push_back({BlockKind::Nonneg, pos, K.n_nonneg, 0});
    pos += K.n_nonneg;
  }
  for (index_t q : K.soc_dims) {
    out.push_back({BlockKind::Soc, pos, q, 0});
    pos += q;
  }
  for (index_t s : K.psd_dims) {
    out.push_back({BlockKind::Psd, pos, s * s, s});
    pos += s * s;
  }
  return out;
}

Vector project(const ConeSpec& K, const Vector& z) {
  check_length(K, z, "project");
  const std::vector<BlockView> blks = blocks(K);
  Vector out(z.size());
  const index_t nb = static_cast<index_t>(blks.size());
#pragma omp parallel for schedule(dynamic) \
    if (nb > 1 && static_cast<index_t>(z.size()) >= kParallelGrain)
  for (index_t b = 0; b < nb; ++b) project_block(blks[b], z.data(), out.data());
  return out;
}

Vector project_serial(const ConeSpec& K, const Vector& z) {
  check_length(K, z, "project");
  const std::vector<BlockView> blks = blocks(K);
  Vector out(z.size());
  for (const BlockView& blk : blks) project_block(blk, z.data(), out.data());
  return out;
}

double membership_margin(const ConeSpec& K, const Vector& x) {
  check_length(K, x, "membership_margin");
  double margin = std::numeric_limits<double>::infinity();
  for (const BlockView& blk : blocks(K)) margin = std::min(margin, block_margin(blk, x.data()));
  return margin;
}

}  // namespace sdls
