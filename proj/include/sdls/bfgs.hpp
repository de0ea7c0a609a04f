#pragma once

#include <functional>
#include <iosfwd>

#include "sdls/linalg.hpp"

namespace sdls {

enum class BfgsStatus { Converged, MaxIters, LineSearchFailure, Stalled };

const char* to_string(BfgsStatus s);

/// Passed to the optional per-step observer after each accepted step.
struct BfgsStepRecord {
  index_t iteration;  // 1-based accepted-step index
  Vector y_prev;
  Vector y_new;
  double f_prev;
  double f_new;
  double step;  // accepted line-search step length
};

struct BfgsOptions {
  double grad_tol = 1e-6;  // stop when ||g|| <= grad_tol
  index_t max_iters = 200;
  bool verbose = false;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  std::ostream* log = nullptr;  // verbose lines go here (std::cerr when null)
  std::function<void(const BfgsStepRecord&)> on_step;  // diagnostics hook
};

struct BfgsResult {
  Vector y;
  double f = 0.0;
  Vector g;
  Matrix H;  // inverse-Hessian approximation
  index_t iterations = 0;
  BfgsStatus status = BfgsStatus::MaxIters;
};

/// Objective callback: fills grad (sized like y) and returns f(y).
/// Non-finite values returned after the first evaluation are treated as
/// "too far" by the line search, never propagated as exceptions.
using Objective = std::function<double(const Vector& y, Vector& grad)>;

/// Full-memory BFGS with a weak Wolfe line search.
///
/// H starts at the identity and is updated with the usual rank-two
/// formula, skipped whenever the curvature product s'y is not safely
/// positive. The line search brackets by secant-extrapolated doubling and
/// then interpolates inside the bracket (bisection safeguard, at most 60
/// evaluations); an accepted step is refined towards the one-dimensional
/// stationary point when the directional derivative is still large, which
/// makes the search exact on quadratics.
BfgsResult minimize(const Objective& f, const Vector& y0, const BfgsOptions& opts);

// Rank-two inverse-Hessian update kernel,
//   H <- H - rho (s u' + u s') + rho (1 + rho y'u) s s'    with u = H y.
// Row-parallel with a serial reference twin; both keep H exactly symmetric.
void inverse_hessian_update(Matrix& H, const Vector& s, const Vector& u, double rho,
                            double y_dot_u);
void inverse_hessian_update_serial(Matrix& H, const Vector& s, const Vector& u, double rho,
                                   double y_dot_u);

}  // namespace sdls
