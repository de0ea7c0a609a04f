#include "sdls/dual.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "sdls/errors.hpp"

namespace sdls {

DualOracle::DualOracle(SparseMatrix A, Vector b, Vector c, ConeSpec K, double reg)
    : A_(std::move(A)), b_(std::move(b)), c_(std::move(c)), K_(std::move(K)), reg_(reg) {
  if (static_cast<index_t>(b_.size()) != A_.nrows())
    throw std::invalid_argument("DualOracle: b has length " + std::to_string(b_.size()) +
                                ", expected m=" + std::to_string(A_.nrows()));
  if (static_cast<index_t>(c_.size()) != A_.ncols())
    throw std::invalid_argument("DualOracle: c has length " + std::to_string(c_.size()) +
                                ", expected n=" + std::to_string(A_.ncols()));
  validate(K_, A_.ncols());
  if (!(reg_ >= 0.0)) throw std::invalid_argument("DualOracle: reg must be nonnegative");
  if (!all_finite(b_) || !all_finite(c_))
    throw std::invalid_argument("DualOracle: non-finite data");
}

Vector DualOracle::primal_from_dual(const Vector& y) const {
  if (static_cast<index_t>(y.size()) != A_.nrows())
    throw std::invalid_argument("DualOracle: y has length " + std::to_string(y.size()) +
                                ", expected m=" + std::to_string(A_.nrows()));
  Vector z = matvec_transpose(A_, y);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += c_[i];
  return project(K_, z);
}

DualEval DualOracle::eval(const Vector& y) const {
  Vector x = primal_from_dual(y);

  double f = 0.5 * dot(x, x) - dot(b_, y);
  Vector g = matvec(A_, x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b_[i];
  if (reg_ != 0.0) {
    f += 0.5 * reg_ * dot(y, y);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += reg_ * y[i];
  }

  if (!std::isfinite(f) || !all_finite(g))
    throw NumericalError("dual objective evaluated to a non-finite value");
  return DualEval{f, std::move(g), std::move(x)};
}

}  // namespace sdls
