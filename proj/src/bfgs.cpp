#include "sdls/bfgs.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sdls {

namespace {

constexpr index_t kParallelGrain = 16384;
constexpr int kMaxLineSearchEvals = 60;
constexpr double kTinyStep = 1e-16;
constexpr int kStallLimit = 10;

struct LineSearchOutcome {
  bool ok = false;
  double step = 0.0;
  double f = 0.0;
  Vector y;
  Vector g;
  // best finite trial seen, kept so a failed search can still hand back
  // whatever progress it made
  bool improved = false;
  double best_f = 0.0;
  Vector best_y;
  Vector best_g;
};

Vector point_at(const Vector& y0, double alpha, const Vector& d) {
  Vector y = y0;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * d[i];
  return y;
}

// Weak Wolfe line search on phi(a) = f(y0 + a d), d a descent direction.
//
// Brackets by doubling (secant-extrapolated when the curvature samples
// allow it), then shrinks [lo, hi] by secant interpolation safeguarded to
// the middle 80% of the bracket, falling back to bisection. Trial points
// with non-finite objective shrink the bracket from above. An accepted
// point still far from the one-dimensional stationary point is polished
// with one extra secant step, kept only if it satisfies both Wolfe
// conditions and does not increase phi: on a quadratic this lands the
// exact minimizer.
LineSearchOutcome weak_wolfe_search(const Objective& oracle, const Vector& y0, double f0,
                                    const Vector& d, double d0, double c1, double c2) {
  const double inf = std::numeric_limits<double>::infinity();
  double lo = 0.0, dlo = d0;
  double hi = inf, dhi = 0.0;
  bool dhi_known = false;
  double alpha = 1.0;

  LineSearchOutcome out;
  Vector gtrial(y0.size());

  auto accept = [&](double a, double fa, Vector ya, Vector ga, double da) {
    // polish towards phi'(a) = 0 when the slope gap is still significant
    if (std::abs(da) > 1e-3 * std::abs(d0) && da > d0) {
      const double ap = -d0 * a / (da - d0);
      if (std::isfinite(ap) && ap > 0.0 && std::abs(ap - a) > 1e-12 * a) {
        Vector yp = point_at(y0, ap, d);
        Vector gp(y0.size());
        const double fp = oracle(yp, gp);
        if (std::isfinite(fp) && all_finite(gp) && fp <= f0 + c1 * ap * d0 && fp <= fa &&
            dot(gp, d) >= c2 * d0) {
          out.ok = true;
          out.step = ap;
          out.f = fp;
          out.y = std::move(yp);
          out.g = std::move(gp);
          return;
        }
      }
    }
    out.ok = true;
    out.step = a;
    out.f = fa;
    out.y = std::move(ya);
    out.g = std::move(ga);
  };

  for (int k = 0; k < kMaxLineSearchEvals; ++k) {
    Vector ytrial = point_at(y0, alpha, d);
    const double ftrial = oracle(ytrial, gtrial);
    const bool finite = std::isfinite(ftrial) && all_finite(gtrial);
    const double dtrial = finite ? dot(gtrial, d) : 0.0;

    if (finite && ftrial < (out.improved ? out.best_f : f0)) {
      out.improved = true;
      out.best_f = ftrial;
      out.best_y = ytrial;
      out.best_g = gtrial;
    }

    if (!finite) {
      hi = alpha;
      dhi_known = false;
    } else if (ftrial > f0 + c1 * alpha * d0) {
      hi = alpha;
      dhi = dtrial;
      dhi_known = true;
    } else if (dtrial < c2 * d0) {
      const double lo_prev = lo, dlo_prev = dlo;
      lo = alpha;
      dlo = dtrial;
      if (hi == inf) {
        // extrapolate: secant root of the rising derivative, else double
        double next = 2.0 * alpha;
        if (dtrial > dlo_prev) {
          const double root = lo_prev - dlo_prev * (alpha - lo_prev) / (dtrial - dlo_prev);
          if (std::isfinite(root) && root > alpha && root <= 100.0 * alpha) next = root;
        }
        alpha = next;
        continue;
      }
    } else {
      accept(alpha, ftrial, std::move(ytrial), std::move(gtrial), dtrial);
      return out;
    }

    const double width = hi - lo;
    double next = lo + 0.5 * width;
    if (dhi_known && dhi > dlo) {
      const double sec = lo - dlo * width / (dhi - dlo);
      if (sec >= lo + 0.1 * width && sec <= hi - 0.1 * width) next = sec;
    }
    alpha = next;
    if (!(alpha > 0.0) || !std::isfinite(alpha)) break;
  }
  return out;  // not ok
}

}  // namespace

const char* to_string(BfgsStatus s) {
  switch (s) {
    case BfgsStatus::Converged:
      return "converged";
    case BfgsStatus::MaxIters:
      return "max_iters";
    case BfgsStatus::LineSearchFailure:
      return "line_search_failure";
    case BfgsStatus::Stalled:
      return "stalled";
  }
  return "unknown";
}

void inverse_hessian_update(Matrix& H, const Vector& s, const Vector& u, double rho,
                            double y_dot_u) {
  const index_t m = H.rows();
  const double ss_coef = rho * (1.0 + rho * y_dot_u);
#pragma omp parallel for schedule(static) if (m * m >= kParallelGrain)
  for (index_t j = 0; j < m; ++j) {
    const double sj = s[j], uj = u[j];
    double* col = H.data() + j * m;
    for (index_t i = 0; i < m; ++i)
      col[i] += ss_coef * s[i] * sj - rho * (s[i] * uj + u[i] * sj);
  }
}

void inverse_hessian_update_serial(Matrix& H, const Vector& s, const Vector& u, double rho,
                                   double y_dot_u) {
  const index_t m = H.rows();
  const double ss_coef = rho * (1.0 + rho * y_dot_u);
  for (index_t j = 0; j < m; ++j) {
    const double sj = s[j], uj = u[j];
    double* col = H.data() + j * m;
    for (index_t i = 0; i < m; ++i)
      col[i] += ss_coef * s[i] * sj - rho * (s[i] * uj + u[i] * sj);
  }
}

BfgsResult minimize(const Objective& oracle, const Vector& y0, const BfgsOptions& opts) {
  if (!(opts.wolfe_c1 > 0.0 && opts.wolfe_c1 < opts.wolfe_c2 && opts.wolfe_c2 < 1.0))
    throw std::invalid_argument("bfgs: need 0 < wolfe_c1 < wolfe_c2 < 1");
  if (!(opts.grad_tol > 0.0)) throw std::invalid_argument("bfgs: grad_tol must be positive");
  if (opts.max_iters < 0) throw std::invalid_argument("bfgs: max_iters must be nonnegative");

  const index_t m = static_cast<index_t>(y0.size());
  BfgsResult r;
  r.y = y0;
  r.g.resize(m);
  r.f = oracle(r.y, r.g);
  if (!std::isfinite(r.f) || !all_finite(r.g))
    throw std::invalid_argument("bfgs: objective is not finite at the starting point");
  r.H = Matrix::identity(m);

  std::ostream& log = opts.log ? *opts.log : std::cerr;
  int tiny_steps = 0;
  bool restarted = false;  // one identity restart allowed per accepted step

  while (true) {
    if (norm2(r.g) <= opts.grad_tol) {
      r.status = BfgsStatus::Converged;
      return r;
    }
    if (r.iterations >= opts.max_iters) {
      r.status = BfgsStatus::MaxIters;
      return r;
    }

    Vector d = dense_matvec(r.H, r.g);
    for (double& v : d) v = -v;
    double dg = dot(r.g, d);
    if (!(dg < 0.0)) {
      // H has lost positive definiteness numerically; restart from identity
      r.H = Matrix::identity(m);
      d = r.g;
      for (double& v : d) v = -v;
      dg = dot(r.g, d);
      if (!(dg < 0.0)) {
        r.status = BfgsStatus::LineSearchFailure;
        return r;
      }
    }

    LineSearchOutcome ls =
        weak_wolfe_search(oracle, r.y, r.f, d, dg, opts.wolfe_c1, opts.wolfe_c2);
    if (!ls.ok) {
      if (ls.improved && ls.best_f < r.f) {
        // no Wolfe point, but the search still made progress: keep it
        r.y = std::move(ls.best_y);
        r.f = ls.best_f;
        r.g = std::move(ls.best_g);
      }
      if (!restarted) {
        // the quasi-Newton direction went bad; retry once as steepest descent
        restarted = true;
        r.H = Matrix::identity(m);
        continue;
      }
      r.status = norm2(r.g) <= opts.grad_tol ? BfgsStatus::Converged
                                             : BfgsStatus::LineSearchFailure;
      return r;
    }
    restarted = false;

    Vector s(m), gdiff(m);
    for (index_t i = 0; i < m; ++i) {
      s[i] = ls.y[i] - r.y[i];
      gdiff[i] = ls.g[i] - r.g[i];
    }

    const double f_prev = r.f;
    Vector y_prev;
    if (opts.on_step) y_prev = r.y;

    r.y = std::move(ls.y);
    r.f = ls.f;
    r.g = std::move(ls.g);
    ++r.iterations;

    if (opts.verbose) {
      char line[128];
      std::snprintf(line, sizeof(line), "%5lld  %+.10e  %.4e  %.4e",
                    static_cast<long long>(r.iterations), r.f, norm2(r.g), ls.step);
      log << line << '\n';
    }
    if (opts.on_step)
      opts.on_step(BfgsStepRecord{r.iterations, std::move(y_prev), r.y, f_prev, r.f, ls.step});

    const double sy = dot(gdiff, s);
    if (sy > 1e-12 * norm2(s) * norm2(gdiff)) {
      Vector u = dense_matvec(r.H, gdiff);
      inverse_hessian_update(r.H, s, u, 1.0 / sy, dot(gdiff, u));
    }

    if (ls.step < kTinyStep) {
      if (++tiny_steps >= kStallLimit) {
        r.status = BfgsStatus::Stalled;
        return r;
      }
    } else {
      tiny_steps = 0;
    }
  }
}

}  // namespace sdls
