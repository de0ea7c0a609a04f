#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "sdls/linalg.hpp"
#include "sdls/solver.hpp"

namespace sdls {

/// Grammar-level failure while reading a document. Semantic problems
/// (wrong types, inconsistent lengths, unknown fields) throw
/// std::invalid_argument naming the offending field instead.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, index_t line, index_t column);
  index_t line() const { return line_; }
  index_t column() const { return column_; }

 private:
  index_t line_;
  index_t column_;
};

struct ParsedProblem {
  Problem problem;
  std::optional<Params> pars;
};

/// Solution document as stored on disk: the info block keeps the gradient
/// norm, not the gradient, and H appears only when it was requested.
struct SolutionDocument {
  Vector x;
  Vector y;
  double f = 0.0;
  double gnorm = 0.0;
  double residual = 0.0;
  index_t iterations = 0;
  double time_sec = 0.0;
  std::string status;
  std::optional<Matrix> H;
};

/// Problem file layout (all numbers finite, indices 0-based):
///
///   {
///     "version": 1,
///     "m": <rows>, "n": <cols>,
///     "A": {"rows": [...], "cols": [...], "vals": [...]},
///     "b": [...],
///     "c": [...] | null,
///     "K": {"f": 0, "l": 0, "q": [...], "s": [...]},   // optional
///     "pars": {"eps":., "fid":., "maxit":., "reg":., "scaling":.}  // optional
///   }
///
/// Absent c / K carry the usual defaults (zero target, all-free cone).
ParsedProblem read_problem(const std::string& text);

/// Deterministic canonical form: fixed key order, two-space indent,
/// numbers at 17 significant digits so doubles survive a round trip.
std::string write_problem(const Problem& p,
                          const std::optional<Params>& pars = std::nullopt);

std::string write_solution(const Solution& sol, bool include_H = false);
SolutionDocument read_solution(const std::string& text);

/// Square dense matrix document {"version":1, "n":., "entries":[...]}
/// with entries in row-major order.
Matrix read_matrix_document(const std::string& text);
std::string write_matrix_document(const Matrix& C);

}  // namespace sdls
