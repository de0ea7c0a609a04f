#pragma once

#include "sdls/cone.hpp"
#include "sdls/linalg.hpp"

namespace sdls {

struct DualEval {
  double f;  // objective value
  Vector g;  // gradient, length m
  Vector x;  // primal candidate p_K(c + A'y), length n
};

/// Smooth dual objective
///
///   f(y) = 1/2 ||p_K(c + A'y)||^2 - b'y + (reg/2) ||y||^2
///
/// whose gradient is A p_K(c + A'y) - b + reg y. With reg = 0 the
/// gradient is exactly the primal residual A x - b, so the gradient norm
/// doubles as the feasibility measure. The Tikhonov term (reg > 0) makes
/// the objective strongly convex when the plain dual is unattained.
///
/// Immutable after construction; eval is pure and reentrant.
class DualOracle {
 public:
  DualOracle(SparseMatrix A, Vector b, Vector c, ConeSpec K, double reg = 0.0);

  /// One objective/gradient evaluation. The primal candidate is returned
  /// alongside so callers get the projection the evaluation already paid for.
  DualEval eval(const Vector& y) const;

  /// p_K(c + A'y), the primal point a dual point maps to.
  Vector primal_from_dual(const Vector& y) const;

  const SparseMatrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }
  const ConeSpec& cone() const { return K_; }
  double reg() const { return reg_; }

 private:
  SparseMatrix A_;
  Vector b_;
  Vector c_;
  ConeSpec K_;
  double reg_;
};

}  // namespace sdls
