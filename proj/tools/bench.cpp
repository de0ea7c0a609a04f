// Times each parallel kernel against its serial reference twin and checks
// that the two outputs are bitwise identical. Usage: sdls_bench [scale]
// where scale multiplies the default problem sizes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sdls/bfgs.hpp"
#include "sdls/cone.hpp"
#include "sdls/linalg.hpp"

using namespace sdls;

namespace {

std::mt19937_64 rng(20240615);

Vector random_vector(index_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, dt);
  }
  return best;
}

bool bitwise_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

void report(const char* name, const std::string& size, double serial, double parallel,
            bool identical) {
  std::printf("%-24s %-22s %10.3f ms %10.3f ms  x%.2f  %s\n", name, size.c_str(),
              serial * 1e3, parallel * 1e3, serial / parallel,
              identical ? "bitwise equal" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  if (!(scale > 0)) {
    std::fprintf(stderr, "usage: %s [scale>0]\n", argv[0]);
    return 1;
  }
  const int reps = 5;
  bool all_identical = true;

  std::printf("%-24s %-22s %13s %13s\n", "kernel", "size", "serial", "parallel");

  {
    const index_t m = static_cast<index_t>(4000 * scale);
    const index_t n = 2 * m;
    const index_t nnz_per_row = 16;
    std::vector<Triplet> entries;
    std::uniform_int_distribution<index_t> col(0, n - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (index_t i = 0; i < m; ++i)
      for (index_t k = 0; k < nnz_per_row; ++k) entries.push_back({i, col(rng), u(rng)});
    SparseMatrix A(m, n, entries);
    const Vector v = random_vector(n);
    const Vector w = random_vector(m);

    Vector out_p, out_s;
    const double ts = time_best_of(reps, [&] { out_s = matvec_serial(A, v); });
    const double tp = time_best_of(reps, [&] { out_p = matvec(A, v); });
    bool same = bitwise_equal(out_p, out_s);
    all_identical = all_identical && same;
    report("sparse matvec", "m=" + std::to_string(m) + " nnz=" + std::to_string(A.nnz()),
           ts, tp, same);

    const double tts = time_best_of(reps, [&] { out_s = matvec_transpose_serial(A, w); });
    const double ttp = time_best_of(reps, [&] { out_p = matvec_transpose(A, w); });
    same = bitwise_equal(out_p, out_s);
    all_identical = all_identical && same;
    report("sparse matvec^T", "m=" + std::to_string(m) + " nnz=" + std::to_string(A.nnz()),
           tts, ttp, same);
  }

  {
    const index_t n = static_cast<index_t>(1200 * std::sqrt(scale));
    Matrix M(n, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (index_t j = 0; j < n; ++j)
      for (index_t i = 0; i < n; ++i) M(i, j) = u(rng);
    const Vector v = random_vector(n);

    Vector out_p, out_s;
    const double ts = time_best_of(reps, [&] { out_s = dense_matvec_serial(M, v); });
    const double tp = time_best_of(reps, [&] { out_p = dense_matvec(M, v); });
    const bool same = bitwise_equal(out_p, out_s);
    all_identical = all_identical && same;
    report("dense matvec", std::to_string(n) + "x" + std::to_string(n), ts, tp, same);
  }

  {
    ConeSpec K;
    K.n_nonneg = static_cast<index_t>(20000 * scale);
    const index_t socs = static_cast<index_t>(200 * scale);
    for (index_t i = 0; i < socs; ++i) K.soc_dims.push_back(50);
    for (index_t i = 0; i < 16; ++i) K.psd_dims.push_back(20);
    const Vector z = random_vector(K.total_dim());

    Vector out_p, out_s;
    const double ts = time_best_of(reps, [&] { out_s = project_serial(K, z); });
    const double tp = time_best_of(reps, [&] { out_p = project(K, z); });
    const bool same = bitwise_equal(out_p, out_s);
    all_identical = all_identical && same;
    report("cone projection", "dim=" + std::to_string(K.total_dim()), ts, tp, same);
  }

  {
    const index_t n = static_cast<index_t>(1000 * std::sqrt(scale));
    Matrix H = Matrix::identity(n);
    const Vector s = random_vector(n);
    const Vector y = random_vector(n);
    const Vector u = dense_matvec(H, y);
    const double rho = 1.0 / dot(y, s);
    const double yu = dot(y, u);

    Matrix hp, hs;
    const double ts = time_best_of(reps, [&] {
      hs = H;
      inverse_hessian_update_serial(hs, s, u, rho, yu);
    });
    const double tp = time_best_of(reps, [&] {
      hp = H;
      inverse_hessian_update(hp, s, u, rho, yu);
    });
    bool same = hp.rows() == hs.rows() && hp.cols() == hs.cols();
    if (same)
      for (index_t j = 0; j < n && same; ++j)
        for (index_t i = 0; i < n; ++i)
          if (hp(i, j) != hs(i, j)) {
            same = false;
            break;
          }
    all_identical = all_identical && same;
    report("BFGS H update", std::to_string(n) + "x" + std::to_string(n), ts, tp, same);
  }

  if (!all_identical) {
    std::fprintf(stderr, "parallel and serial kernels disagree\n");
    return 1;
  }
  return 0;
}
