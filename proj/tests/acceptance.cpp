// Acceptance gate: one line per criterion, exit code = number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sdls/bfgs.hpp"
#include "sdls/cone.hpp"
#include "sdls/dual.hpp"
#include "sdls/linalg.hpp"
#include "sdls/problem_io.hpp"
#include "sdls/solver.hpp"
#include "testutil.hpp"

using namespace sdls;

namespace {

int failures = 0;

void report(int num, const std::string& label, bool ok) {
  std::printf("criterion %2d  %s  %s\n", num, ok ? "PASS" : "FAIL", label.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool guarded(const std::function<bool()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "  unexpected exception: %s\n", e.what());
    return false;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Params quiet() {
  Params p;
  p.fid = false;
  return p;
}

Matrix example_correlation() {
  Matrix C(3, 3);
  C(0, 0) = C(1, 1) = C(2, 2) = 1.0;
  C(0, 1) = C(1, 0) = 0.5;
  C(0, 2) = C(2, 0) = 1.0;
  C(1, 2) = C(2, 1) = 0.25;
  return C;
}

Problem random_feasible(std::mt19937_64& g, const ConeSpec& K, index_t m) {
  const index_t n = K.total_dim();
  SparseMatrix A = testutil::random_dense_sparse(g, m, n);
  const Vector x0 = project(K, testutil::random_vector(g, n));
  Vector b = matvec(A, x0);
  Vector c = testutil::random_vector(g, n);
  return Problem{std::move(A), std::move(b), std::move(c), K};
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(SDLS_DATA_DIR) + "/" + name, std::ios::binary);
  if (!in) throw std::runtime_error("missing data file " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- criterion bodies -------------------------------------------------------

bool install_check(double& elapsed) {
  const Problem p{SparseMatrix(1, 2, {{0, 0, 1.0}}), {1.0}, std::nullopt, std::nullopt};
  const auto t0 = std::chrono::steady_clock::now();
  const Solution sol = solve(p, quiet());
  elapsed = seconds_since(t0);
  return sol.info.status == BfgsStatus::Converged && std::abs(sol.x[0] - 1.0) <= 1e-6 &&
         std::abs(sol.x[1]) <= 1e-6 && elapsed < 0.1;
}

bool nearcorr_example(double& elapsed) {
  const auto t0 = std::chrono::steady_clock::now();
  const Solution sol = solve(build_nearcorr_problem(example_correlation()), quiet());
  elapsed = seconds_since(t0);
  if (sol.info.status != BfgsStatus::Converged || elapsed >= 1.0) return false;
  Matrix X(3, 3);
  for (index_t j = 0; j < 3; ++j)
    for (index_t i = 0; i < 3; ++i) X(i, j) = sol.x[j * 3 + i];
  bool ok = std::abs(X(0, 1) - 0.4910) <= 5e-4 && std::abs(X(0, 2) - 0.9684) <= 5e-4 &&
            std::abs(X(1, 2) - 0.2582) <= 5e-4;
  for (index_t i = 0; i < 3; ++i) ok = ok && std::abs(X(i, i) - 1.0) <= 1e-6;
  return ok && oracle::min_eigenvalue(X) >= -1e-8;
}

bool margin_diagnostic() {
  const Matrix C = example_correlation();
  Vector z(9);
  for (index_t j = 0; j < 3; ++j)
    for (index_t i = 0; i < 3; ++i) z[j * 3 + i] = C(i, j);
  return std::abs(membership_margin(ConeSpec{0, 0, {}, {3}}, z) - (-0.0349)) <= 1e-3;
}

bool gradient_residual_identity() {
  auto g = testutil::rng(1001);
  Params pars = quiet();
  pars.scaling = false;
  pars.reg = 0.0;
  int converged = 0;
  for (int attempt = 0; attempt < 200 && converged < 20; ++attempt) {
    const ConeSpec K = testutil::random_cone(g);
    const index_t m = std::min<index_t>(K.total_dim(), 1 + attempt % 4);
    const Problem p = random_feasible(g, K, m);
    const Solution sol = solve(p, pars);
    if (sol.info.status != BfgsStatus::Converged) continue;
    Vector r = matvec(p.A, sol.x);
    for (index_t i = 0; i < m; ++i) r[i] -= p.b[i];
    if (std::abs(norm2(sol.info.g) - norm2(r)) > 1e-13 * std::max(1.0, norm2(p.b)))
      return false;
    ++converged;
  }
  return converged == 20;
}

bool projection_properties() {
  auto g = testutil::rng(1002);
  const auto draw_cone = [&](int kind) {
    std::uniform_int_distribution<index_t> free_d(1, 12), soc_d(2, 10), psd_d(2, 6);
    switch (kind) {
      case 0: return ConeSpec{free_d(g), 0, {}, {}};
      case 1: return ConeSpec{0, free_d(g), {}, {}};
      case 2: return ConeSpec{0, 0, {soc_d(g)}, {}};
      case 3: return ConeSpec{0, 0, {}, {psd_d(g)}};
      default: {
        std::uniform_int_distribution<index_t> small(0, 3), soc_s(2, 5), psd_s(2, 4);
        return ConeSpec{small(g), small(g), {soc_s(g)}, {psd_s(g)}};
      }
    }
  };
  for (int kind = 0; kind < 5; ++kind) {
    for (int i = 0; i < 1000; ++i) {
      const ConeSpec K = draw_cone(kind);
      const index_t n = K.total_dim();
      const Vector z = testutil::random_vector(g, n, -3.0, 3.0);
      const Vector z2 = testutil::random_vector(g, n, -3.0, 3.0);
      const Vector p = project(K, z);
      const Vector p2 = project(K, z2);
      const double zn = norm2(z);

      Vector pp = project(K, p);
      double idempotence = 0.0, ortho = 0.0, dz = 0.0, dp = 0.0;
      for (index_t j = 0; j < n; ++j) {
        idempotence += (pp[j] - p[j]) * (pp[j] - p[j]);
        ortho += p[j] * (z[j] - p[j]);
        dz += (z[j] - z2[j]) * (z[j] - z2[j]);
        dp += (p[j] - p2[j]) * (p[j] - p2[j]);
      }
      if (std::sqrt(idempotence) > 1e-10) return false;
      if (std::abs(ortho) > 1e-8 * std::max(1.0, zn * zn)) return false;
      if (std::sqrt(dp) > std::sqrt(dz) * (1.0 + 1e-12) + 1e-12) return false;

      for (const double alpha : {0.0, 0.5, 2.0}) {
        Vector az(n);
        for (index_t j = 0; j < n; ++j) az[j] = alpha * z[j];
        const Vector pa = project(K, az);
        for (index_t j = 0; j < n; ++j)
          if (std::abs(pa[j] - alpha * p[j]) > 1e-10 * std::max(1.0, alpha * zn))
            return false;
      }
    }
  }
  return true;
}

bool gradient_oracle_check() {
  auto g = testutil::rng(1003);
  std::uniform_int_distribution<index_t> small(0, 3), soc_d(2, 6), psd_d(2, 4);
  for (int i = 0; i < 100; ++i) {
    ConeSpec K{small(g), 2 * small(g), {}, {}};
    if (i % 2) K.soc_dims.push_back(soc_d(g));
    if (i % 3 == 0) K.psd_dims.push_back(psd_d(g));
    if (K.total_dim() == 0) K.n_nonneg = 2;
    const index_t n = K.total_dim();  // <= 3 + 6 + 6 + 16 = 31? keep within 30
    if (n > 30) continue;
    const index_t m = std::min<index_t>(n, 1 + static_cast<index_t>(g() % 10));
    const SparseMatrix A = testutil::random_dense_sparse(g, m, n);
    const Vector b = testutil::random_vector(g, m);
    const Vector c = testutil::random_vector(g, n);
    const double reg = (i % 5 == 0) ? 0.1 : 0.0;
    DualOracle oracle(A, b, c, K, reg);
    const Vector y = testutil::random_vector(g, m);
    const Vector grad = oracle.eval(y).g;
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& v) { return oracle.eval(v).f; }, y, 1e-6);
    for (index_t j = 0; j < m; ++j)
      if (std::abs(fd[j] - grad[j]) > 1e-4 * std::max(1.0, std::abs(grad[j])))
        return false;
  }
  return true;
}

bool brute_force_equivalence(double& elapsed) {
  const auto t0 = std::chrono::steady_clock::now();
  auto g = testutil::rng(1004);
  Params pars = quiet();
  pars.eps = 1e-8;
  for (int i = 0; i < 50; ++i) {
    const index_t m = 1 + static_cast<index_t>(g() % 4);
    const index_t n = std::max<index_t>(m, 2 + static_cast<index_t>(g() % 7));
    const Matrix Ad = testutil::random_matrix(g, m, n);
    const Vector x0 = testutil::random_vector(g, n, 0.0, 1.0);
    const Vector c = testutil::random_vector(g, n);
    Vector b(m, 0.0);
    for (index_t r = 0; r < m; ++r)
      for (index_t j = 0; j < n; ++j) b[r] += Ad(r, j) * x0[j];
    const Problem p{testutil::to_sparse(Ad), b, c, ConeSpec{0, n, {}, {}}};
    const Solution sol = solve(p, pars);
    if (sol.info.status != BfgsStatus::Converged) return false;
    const Vector ref = oracle::nonneg_lsq(Ad, b, c);
    if (testutil::max_abs_diff(sol.x, ref) > 1e-5) return false;
  }
  elapsed = seconds_since(t0);
  return elapsed < 30.0;
}

bool dykstra_cross_check() {
  auto g = testutil::rng(1005);
  Params pars = quiet();  // default eps; the criterion is the 1e-4 agreement
  for (int i = 0; i < 10; ++i) {
    Matrix C = testutil::random_symmetric(g, 5);
    for (index_t k = 0; k < 5; ++k) C(k, k) = 1.0;
    const Solution sol = solve(build_nearcorr_problem(C), pars);
    if (sol.info.status != BfgsStatus::Converged) return false;
    const Matrix ref = oracle::nearest_correlation(C, 10000);
    double frob = 0.0;
    for (index_t r = 0; r < 5; ++r)
      for (index_t s = 0; s < 5; ++s) {
        const double d = sol.x[s * 5 + r] - ref(r, s);
        frob += d * d;
      }
    if (std::sqrt(frob) > 1e-4) return false;
  }
  return true;
}

// Recheck the weak Wolfe conditions from the step records alone.
struct WolfeAudit {
  const Objective& fn;
  double c1, c2;
  bool ok = true;
  void operator()(const BfgsStepRecord& rec) {
    const index_t n = static_cast<index_t>(rec.y_prev.size());
    Vector d(n);
    for (index_t i = 0; i < n; ++i) d[i] = (rec.y_new[i] - rec.y_prev[i]) / rec.step;
    Vector g_prev(n), g_new(n);
    const double f_prev = fn(rec.y_prev, g_prev);
    const double f_new = fn(rec.y_new, g_new);
    const double d_prev = dot(g_prev, d);
    const double d_new = dot(g_new, d);
    const double slack = 1e-12 * std::max(1.0, std::abs(f_prev));
    ok = ok && d_prev < 0.0 &&
         f_new <= f_prev + c1 * rec.step * d_prev + slack &&
         d_new >= c2 * d_prev - 1e-12 * std::abs(d_prev) &&
         std::abs(f_prev - rec.f_prev) <= slack && std::abs(f_new - rec.f_new) <= slack;
  }
};

bool bfgs_suite() {
  auto g = testutil::rng(1006);
  for (const index_t n : {1, 2, 4, 6, 8, 10}) {
    const Matrix M = testutil::random_matrix(g, n, n);
    Matrix Q(n, n);
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (index_t k = 0; k < n; ++k) v += M(k, i) * M(k, j);
        Q(i, j) = v;
      }
      Q(i, i) += 1.0;
    }
    const Vector rhs = testutil::random_vector(g, n);
    const Objective fn = [&](const Vector& y, Vector& grad) {
      grad.assign(n, 0.0);
      double f = 0.0;
      for (index_t i = 0; i < n; ++i) {
        double qy = 0.0;
        for (index_t j = 0; j < n; ++j) qy += Q(i, j) * y[j];
        f += 0.5 * y[i] * qy - rhs[i] * y[i];
        grad[i] = qy - rhs[i];
      }
      return f;
    };
    BfgsOptions opts;
    opts.grad_tol = 1e-10;
    WolfeAudit audit{fn, opts.wolfe_c1, opts.wolfe_c2};
    opts.on_step = [&](const BfgsStepRecord& rec) { audit(rec); };
    const BfgsResult r = minimize(fn, Vector(n, 0.0), opts);
    const Vector star = oracle::solve_dense(Q, rhs);
    if (r.status != BfgsStatus::Converged || r.iterations > n + 2 || !audit.ok)
      return false;
    if (testutil::max_abs_diff(r.y, star) > 1e-8) return false;
  }

  const Objective rosen = [](const Vector& y, Vector& grad) {
    const double a = y[1] - y[0] * y[0];
    grad = {-400.0 * y[0] * a - 2.0 * (1.0 - y[0]), 200.0 * a};
    return 100.0 * a * a + (1.0 - y[0]) * (1.0 - y[0]);
  };
  BfgsOptions opts;
  opts.grad_tol = 1e-9;
  opts.max_iters = 200;
  WolfeAudit audit{rosen, opts.wolfe_c1, opts.wolfe_c2};
  opts.on_step = [&](const BfgsStepRecord& rec) { audit(rec); };
  const BfgsResult r = minimize(rosen, Vector{-1.2, 1.0}, opts);
  return r.status == BfgsStatus::Converged && r.iterations <= 200 && audit.ok &&
         std::abs(r.y[0] - 1.0) <= 1e-4 && std::abs(r.y[1] - 1.0) <= 1e-4;
}

bool io_round_trip() {
  for (const char* name : {"install_check.sdls.json", "nearcorr3.sdls.json"}) {
    const std::string text = slurp(name);
    const ParsedProblem doc = read_problem(text);
    if (write_problem(doc.problem, doc.pars) != text) return false;
    const ParsedProblem again = read_problem(write_problem(doc.problem, doc.pars));
    if (again.problem.b != doc.problem.b || again.problem.c != doc.problem.c) return false;
    for (index_t k = 0; k < doc.problem.A.nnz(); ++k)
      if (again.problem.A.triplets()[k].value != doc.problem.A.triplets()[k].value)
        return false;
  }
  const std::string mtext = slurp("nearcorr3_matrix.json");
  const Matrix C = read_matrix_document(mtext);
  return write_matrix_document(C) == mtext;
}

}  // namespace

int main() {
  double t1 = 0.0, t2 = 0.0, t7 = 0.0;
  char label[128];

  bool ok = guarded([&] { return install_check(t1); });
  std::snprintf(label, sizeof label, "install check x=(1,0) in %.3f s (limit 0.1)", t1);
  report(1, label, ok);

  ok = guarded([&] { return nearcorr_example(t2); });
  std::snprintf(label, sizeof label,
                "nearest correlation of the 3x3 example in %.3f s (limit 1)", t2);
  report(2, label, ok);

  report(3, "membership margin of the indefinite input = -0.0349", guarded(margin_diagnostic));
  report(4, "gradient norm == constraint residual on 20 solved instances",
         guarded(gradient_residual_identity));
  report(5, "projection properties, 1000 draws per cone kind", guarded(projection_properties));
  report(6, "dual gradient vs central differences on 100 instances",
         guarded(gradient_oracle_check));

  ok = guarded([&] { return brute_force_equivalence(t7); });
  std::snprintf(label, sizeof label,
                "50 nonneg instances vs active-set oracle in %.1f s (limit 30)", t7);
  report(7, label, ok);

  report(8, "10 nearest-correlation instances vs Dykstra oracle", guarded(dykstra_cross_check));
  report(9, "BFGS: quadratics in dim+2 iters, Rosenbrock, Wolfe audit", guarded(bfgs_suite));
  report(10, "shipped documents: parse-serialize identity, bitwise", guarded(io_round_trip));

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
