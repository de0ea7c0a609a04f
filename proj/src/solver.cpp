#include "sdls/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "sdls/dual.hpp"
#include "sdls/errors.hpp"

namespace sdls {

Solution solve(const Problem& p, const Params& pars, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();

  if (!(pars.eps > 0.0)) throw std::invalid_argument("pars.eps must be positive");
  if (pars.maxit < 1) throw std::invalid_argument("pars.maxit must be at least 1");
  if (!(pars.reg >= 0.0)) throw std::invalid_argument("pars.reg must be nonnegative");

  const index_t m = p.A.nrows();
  const index_t n = p.A.ncols();
  if (m < 1 || n < 1)
    throw std::invalid_argument("problem must have at least one constraint and one variable");
  if (m > n)
    throw std::invalid_argument("more constraints than variables (m=" + std::to_string(m) +
                                " > n=" + std::to_string(n) + ")");
  if (static_cast<index_t>(p.b.size()) != m)
    throw std::invalid_argument("b has length " + std::to_string(p.b.size()) +
                                ", expected m=" + std::to_string(m));
  if (!all_finite(p.b)) throw std::invalid_argument("b contains non-finite values");

  Vector c = p.c.value_or(Vector(n, 0.0));
  if (static_cast<index_t>(c.size()) != n)
    throw std::invalid_argument("c has length " + std::to_string(c.size()) +
                                ", expected n=" + std::to_string(n));
  if (!all_finite(c)) throw std::invalid_argument("c contains non-finite values");

  const ConeSpec K = p.K.value_or(ConeSpec::all_free(n));
  validate(K, n);

  const double scale = pars.scaling ? std::max(1.0, norm2(p.b)) : 1.0;
  Vector b_scaled = p.b;
  if (scale != 1.0)
    for (double& v : b_scaled) v /= scale;
  DualOracle oracle(scale != 1.0 ? p.A.scaled(1.0 / scale) : p.A, std::move(b_scaled), c, K,
                    pars.reg);

  BfgsOptions opts;
  opts.grad_tol = pars.eps * std::max(1.0, norm2(oracle.b()));
  opts.max_iters = pars.maxit;
  opts.verbose = pars.fid;
  opts.log = log;

  // non-finite evaluations far out along a search direction become
  // line-search information instead of aborting the solve
  const Objective fn = [&oracle](const Vector& y, Vector& grad) {
    try {
      DualEval e = oracle.eval(y);
      grad = std::move(e.g);
      return e.f;
    } catch (const NumericalError&) {
      grad.assign(y.size(), std::numeric_limits<double>::quiet_NaN());
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  BfgsResult r = minimize(fn, Vector(m, 0.0), opts);

  Solution sol;
  sol.x = oracle.primal_from_dual(r.y);
  sol.y = std::move(r.y);
  if (scale != 1.0)
    for (double& v : sol.y) v /= scale;

  Vector res = matvec(p.A, sol.x);
  for (index_t i = 0; i < m; ++i) res[i] -= p.b[i];

  sol.info.f = r.f;
  sol.info.g = std::move(r.g);
  sol.info.H = std::move(r.H);
  sol.info.residual = norm2(res);
  sol.info.iterations = r.iterations;
  sol.info.status = r.status;
  sol.info.time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (pars.fid) {
    std::ostream& os = log ? *log : std::cerr;
    char line[160];
    std::snprintf(line, sizeof(line), "%s: %lld iterations, residual %.3e, %.3f s",
                  to_string(sol.info.status), static_cast<long long>(sol.info.iterations),
                  sol.info.residual, sol.info.time_sec);
    os << line << '\n';
    if (sol.info.status == BfgsStatus::MaxIters || sol.info.status == BfgsStatus::Stalled)
      os << "hint: a rank-deficient A or an unattained dual can stall the run; "
            "regularizing with reg=1e-6 usually helps\n";
  }
  return sol;
}

Problem build_nearcorr_problem(const Matrix& C) {
  if (C.rows() != C.cols())
    throw std::invalid_argument("nearcorr: matrix is " + std::to_string(C.rows()) + "x" +
                                std::to_string(C.cols()) + ", not square");
  const index_t nm = C.rows();
  if (nm < 1) throw std::invalid_argument("nearcorr: empty matrix");

  double max_abs = 0.0, max_asym = 0.0;
  for (index_t j = 0; j < nm; ++j)
    for (index_t i = 0; i < nm; ++i) {
      if (!std::isfinite(C(i, j)))
        throw std::invalid_argument("nearcorr: non-finite entry in the matrix");
      max_abs = std::max(max_abs, std::abs(C(i, j)));
      max_asym = std::max(max_asym, std::abs(C(i, j) - C(j, i)));
    }
  if (max_asym > 1e-12 * std::max(1.0, max_abs))
    throw std::invalid_argument("nearcorr: matrix is not symmetric (max asymmetry " +
                                std::to_string(max_asym) + ")");

  std::vector<Triplet> entries;
  entries.reserve(nm);
  for (index_t i = 0; i < nm; ++i) entries.push_back({i, i * (nm + 1), 1.0});

  Vector c(static_cast<std::size_t>(nm * nm));
  for (index_t j = 0; j < nm; ++j)
    for (index_t i = 0; i < nm; ++i) c[j * nm + i] = C(i, j);

  ConeSpec K;
  K.psd_dims = {nm};
  return Problem{SparseMatrix(nm, nm * nm, std::move(entries)), Vector(nm, 1.0), std::move(c),
                 std::move(K)};
}

}  // namespace sdls
