#pragma once

#include <iosfwd>
#include <optional>

#include "sdls/bfgs.hpp"
#include "sdls/cone.hpp"
#include "sdls/linalg.hpp"

namespace sdls {

/// Conic least-squares instance: find the point of K intersected with
/// {x : Ax = b} nearest to c. An absent c means the zero vector; an
/// absent K means every component is free.
struct Problem {
  SparseMatrix A;
  Vector b;
  std::optional<Vector> c;
  std::optional<ConeSpec> K;
};

struct Params {
  double eps = 1e-6;     // relative accuracy of the primal residual
  bool fid = true;       // progress output
  index_t maxit = 200;   // iteration cap for the dual solve
  double reg = 0.0;      // Tikhonov weight on the dual
  bool scaling = true;   // divide A and b by max(1, ||b||)
};

struct Info {
  double f = 0.0;        // dual objective at the final iterate
  Vector g;              // dual gradient at the final iterate
  Matrix H;              // inverse-Hessian approximation
  double time_sec = 0.0;
  double residual = 0.0; // ||Ax - b|| in the original (unscaled) data
  index_t iterations = 0;
  BfgsStatus status = BfgsStatus::MaxIters;
};

struct Solution {
  Vector x;
  Vector y;
  Info info;
};

/// Full pipeline: validate, scale, minimize the dual from y = 0, recover
/// the primal, unscale the multipliers, and report diagnostics. f, g and
/// H describe the scaled regularized dual the minimizer actually saw;
/// residual is always measured in the original data. Non-converged runs
/// return their best iterate through the same structure, with the status
/// in info. Invalid input throws.
Solution solve(const Problem& p, const Params& pars = {}, std::ostream* log = nullptr);

/// Instance of the nearest-correlation-matrix problem for a symmetric C:
/// K is one semidefinite block, c = vec(C), and each row of A picks one
/// diagonal entry so that Ax = 1.
Problem build_nearcorr_problem(const Matrix& C);

}  // namespace sdls
