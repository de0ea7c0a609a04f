#include "sdls/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <utility>

#include <json.hpp>

#include "sdls/cone.hpp"

namespace sdls {

using nlohmann::json;

ParseError::ParseError(const std::string& msg, index_t line, index_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void semantic_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument(field + ": " + what);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the last read byte
    const std::size_t pos = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    index_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(e.what(), line, column);
  } catch (const json::out_of_range& e) {
    // overflowing decimal literals (1e999 and friends)
    throw std::invalid_argument(e.what());
  }
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) semantic_error(where, "unknown field \"" + item.key() + "\"");
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) semantic_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

const json& require_object(const json& obj, const std::string& where, const char* key) {
  const json& j = require(obj, where, key);
  if (!j.is_object()) semantic_error(std::string(key), "expected an object");
  return j;
}

std::int64_t as_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) semantic_error(field, "expected an integer");
  return j.get<std::int64_t>();
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) semantic_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) semantic_error(field, "non-finite value");
  return v;
}

bool as_boolean(const json& j, const std::string& field) {
  if (!j.is_boolean()) semantic_error(field, "expected a boolean");
  return j.get<bool>();
}

Vector as_number_array(const json& j, const std::string& field) {
  if (!j.is_array()) semantic_error(field, "expected an array");
  Vector out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<index_t> as_integer_array(const json& j, const std::string& field) {
  if (!j.is_array()) semantic_error(field, "expected an array");
  std::vector<index_t> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_integer(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

void require_version(const json& doc) {
  const json& v = require(doc, "document", "version");
  if (!v.is_number_integer() || v.get<std::int64_t>() != 1)
    semantic_error("version", "unsupported value (expected 1)");
}

// ---- serialization helpers ----------------------------------------------

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_integer(std::string& out, index_t v) {
  out += std::to_string(v);
}

void append_number_array(std::string& out, const Vector& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    append_number(out, v[i]);
  }
  out += ']';
}

void append_integer_array(std::string& out, const std::vector<index_t>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    append_integer(out, v[i]);
  }
  out += ']';
}

}  // namespace

ParsedProblem read_problem(const std::string& text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) semantic_error("document", "expected an object");
  check_keys(doc, "document", {"version", "m", "n", "A", "b", "c", "K", "pars"});
  require_version(doc);

  const index_t m = as_integer(require(doc, "document", "m"), "m");
  const index_t n = as_integer(require(doc, "document", "n"), "n");
  if (m < 1) semantic_error("m", "must be at least 1");
  if (n < 1) semantic_error("n", "must be at least 1");
  if (m > n)
    semantic_error("m", "more constraints than variables (m=" + std::to_string(m) +
                            " > n=" + std::to_string(n) + ")");

  const json& a = require_object(doc, "document", "A");
  check_keys(a, "A", {"rows", "cols", "vals"});
  const std::vector<index_t> rows = as_integer_array(require(a, "A", "rows"), "A.rows");
  const std::vector<index_t> cols = as_integer_array(require(a, "A", "cols"), "A.cols");
  const Vector vals = as_number_array(require(a, "A", "vals"), "A.vals");
  if (rows.size() != cols.size() || rows.size() != vals.size())
    semantic_error("A", "rows, cols, vals must have equal lengths (" +
                            std::to_string(rows.size()) + ", " + std::to_string(cols.size()) +
                            ", " + std::to_string(vals.size()) + ")");
  std::vector<Triplet> entries(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m)
      semantic_error("A.rows[" + std::to_string(i) + "]",
                     "index " + std::to_string(rows[i]) + " out of range [0, " +
                         std::to_string(m) + ")");
    if (cols[i] < 0 || cols[i] >= n)
      semantic_error("A.cols[" + std::to_string(i) + "]",
                     "index " + std::to_string(cols[i]) + " out of range [0, " +
                         std::to_string(n) + ")");
    entries[i] = Triplet{rows[i], cols[i], vals[i]};
  }

  Vector b = as_number_array(require(doc, "document", "b"), "b");
  if (static_cast<index_t>(b.size()) != m)
    semantic_error("b", "length " + std::to_string(b.size()) + ", expected m=" +
                            std::to_string(m));

  std::optional<Vector> c;
  if (const auto it = doc.find("c"); it != doc.end() && !it->is_null()) {
    c = as_number_array(*it, "c");
    if (static_cast<index_t>(c->size()) != n)
      semantic_error("c", "length " + std::to_string(c->size()) + ", expected n=" +
                              std::to_string(n));
  }

  std::optional<ConeSpec> K;
  if (const auto it = doc.find("K"); it != doc.end()) {
    if (!it->is_object()) semantic_error("K", "expected an object");
    check_keys(*it, "K", {"f", "l", "q", "s"});
    ConeSpec k;
    if (const auto f = it->find("f"); f != it->end()) {
      k.n_free = as_integer(*f, "K.f");
      if (k.n_free < 0) semantic_error("K.f", "must be nonnegative");
    }
    if (const auto l = it->find("l"); l != it->end()) {
      k.n_nonneg = as_integer(*l, "K.l");
      if (k.n_nonneg < 0) semantic_error("K.l", "must be nonnegative");
    }
    if (const auto q = it->find("q"); q != it->end()) {
      k.soc_dims = as_integer_array(*q, "K.q");
      for (std::size_t i = 0; i < k.soc_dims.size(); ++i)
        if (k.soc_dims[i] < 1)
          semantic_error("K.q[" + std::to_string(i) + "]", "must be at least 1");
    }
    if (const auto s = it->find("s"); s != it->end()) {
      k.psd_dims = as_integer_array(*s, "K.s");
      for (std::size_t i = 0; i < k.psd_dims.size(); ++i)
        if (k.psd_dims[i] < 1)
          semantic_error("K.s[" + std::to_string(i) + "]", "must be at least 1");
    }
    validate(k, n);
    K = std::move(k);
  }

  std::optional<Params> pars;
  if (const auto it = doc.find("pars"); it != doc.end()) {
    if (!it->is_object()) semantic_error("pars", "expected an object");
    check_keys(*it, "pars", {"eps", "fid", "maxit", "reg", "scaling"});
    Params p;
    if (const auto eps = it->find("eps"); eps != it->end()) {
      p.eps = as_number(*eps, "pars.eps");
      if (!(p.eps > 0.0)) semantic_error("pars.eps", "must be positive");
    }
    if (const auto fid = it->find("fid"); fid != it->end())
      p.fid = as_boolean(*fid, "pars.fid");
    if (const auto maxit = it->find("maxit"); maxit != it->end()) {
      p.maxit = as_integer(*maxit, "pars.maxit");
      if (p.maxit < 1) semantic_error("pars.maxit", "must be at least 1");
    }
    if (const auto reg = it->find("reg"); reg != it->end()) {
      p.reg = as_number(*reg, "pars.reg");
      if (p.reg < 0.0) semantic_error("pars.reg", "must be nonnegative");
    }
    if (const auto sc = it->find("scaling"); sc != it->end())
      p.scaling = as_boolean(*sc, "pars.scaling");
    pars = p;
  }

  return ParsedProblem{
      Problem{SparseMatrix(m, n, std::move(entries)), std::move(b), std::move(c), std::move(K)},
      pars};
}

std::string write_problem(const Problem& p, const std::optional<Params>& pars) {
  const std::size_t nnz = p.A.triplets().size();
  std::vector<index_t> rows, cols;
  Vector vals;
  rows.reserve(nnz);
  cols.reserve(nnz);
  vals.reserve(nnz);
  for (const Triplet& t : p.A.triplets()) {
    rows.push_back(t.row);
    cols.push_back(t.col);
    vals.push_back(t.value);
  }

  std::string out;
  out += "{\n";
  out += "  \"version\": 1,\n";
  out += "  \"m\": " + std::to_string(p.A.nrows()) + ",\n";
  out += "  \"n\": " + std::to_string(p.A.ncols()) + ",\n";
  out += "  \"A\": {\n    \"rows\": ";
  append_integer_array(out, rows);
  out += ",\n    \"cols\": ";
  append_integer_array(out, cols);
  out += ",\n    \"vals\": ";
  append_number_array(out, vals);
  out += "\n  },\n";
  out += "  \"b\": ";
  append_number_array(out, p.b);
  out += ",\n";
  out += "  \"c\": ";
  if (p.c)
    append_number_array(out, *p.c);
  else
    out += "null";
  if (p.K) {
    out += ",\n  \"K\": {\"f\": " + std::to_string(p.K->n_free) +
           ", \"l\": " + std::to_string(p.K->n_nonneg) + ", \"q\": ";
    append_integer_array(out, p.K->soc_dims);
    out += ", \"s\": ";
    append_integer_array(out, p.K->psd_dims);
    out += "}";
  }
  if (pars) {
    out += ",\n  \"pars\": {\"eps\": ";
    append_number(out, pars->eps);
    out += ", \"fid\": ";
    out += pars->fid ? "true" : "false";
    out += ", \"maxit\": " + std::to_string(pars->maxit) + ", \"reg\": ";
    append_number(out, pars->reg);
    out += ", \"scaling\": ";
    out += pars->scaling ? "true" : "false";
    out += "}";
  }
  out += "\n}\n";
  return out;
}

std::string write_solution(const Solution& sol, bool include_H) {
  std::string out;
  out += "{\n";
  out += "  \"version\": 1,\n";
  out += "  \"x\": ";
  append_number_array(out, sol.x);
  out += ",\n  \"y\": ";
  append_number_array(out, sol.y);
  out += ",\n  \"info\": {\n    \"f\": ";
  append_number(out, sol.info.f);
  out += ",\n    \"gnorm\": ";
  append_number(out, norm2(sol.info.g));
  out += ",\n    \"residual\": ";
  append_number(out, sol.info.residual);
  out += ",\n    \"iterations\": " + std::to_string(sol.info.iterations);
  out += ",\n    \"time_sec\": ";
  append_number(out, sol.info.time_sec);
  out += ",\n    \"status\": \"";
  out += to_string(sol.info.status);
  out += "\"\n  }";
  if (include_H) {
    out += ",\n  \"H\": [";
    const index_t hn = sol.info.H.rows();
    for (index_t i = 0; i < hn; ++i) {
      out += i ? ",\n    [" : "\n    [";
      for (index_t j = 0; j < sol.info.H.cols(); ++j) {
        if (j) out += ", ";
        append_number(out, sol.info.H(i, j));
      }
      out += ']';
    }
    out += "\n  ]";
  }
  out += "\n}\n";
  return out;
}

SolutionDocument read_solution(const std::string& text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) semantic_error("document", "expected an object");
  check_keys(doc, "document", {"version", "x", "y", "info", "H"});
  require_version(doc);

  SolutionDocument sol;
  sol.x = as_number_array(require(doc, "document", "x"), "x");
  sol.y = as_number_array(require(doc, "document", "y"), "y");

  const json& info = require_object(doc, "document", "info");
  check_keys(info, "info", {"f", "gnorm", "residual", "iterations", "time_sec", "status"});
  sol.f = as_number(require(info, "info", "f"), "info.f");
  sol.gnorm = as_number(require(info, "info", "gnorm"), "info.gnorm");
  sol.residual = as_number(require(info, "info", "residual"), "info.residual");
  sol.iterations = as_integer(require(info, "info", "iterations"), "info.iterations");
  sol.time_sec = as_number(require(info, "info", "time_sec"), "info.time_sec");
  const json& status = require(info, "info", "status");
  if (!status.is_string()) semantic_error("info.status", "expected a string");
  sol.status = status.get<std::string>();
  if (sol.status != "converged" && sol.status != "max_iters" &&
      sol.status != "line_search_failure" && sol.status != "stalled")
    semantic_error("info.status", "unknown status \"" + sol.status + "\"");

  if (const auto it = doc.find("H"); it != doc.end()) {
    if (!it->is_array()) semantic_error("H", "expected an array of rows");
    const index_t hn = static_cast<index_t>(it->size());
    Matrix H(hn, hn);
    for (index_t i = 0; i < hn; ++i) {
      const Vector row = as_number_array((*it)[static_cast<std::size_t>(i)],
                                         "H[" + std::to_string(i) + "]");
      if (static_cast<index_t>(row.size()) != hn)
        semantic_error("H[" + std::to_string(i) + "]",
                       "length " + std::to_string(row.size()) + ", expected " +
                           std::to_string(hn));
      for (index_t j = 0; j < hn; ++j) H(i, j) = row[static_cast<std::size_t>(j)];
    }
    sol.H = std::move(H);
  }
  return sol;
}

Matrix read_matrix_document(const std::string& text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) semantic_error("document", "expected an object");
  check_keys(doc, "document", {"version", "n", "entries"});
  require_version(doc);

  const index_t n = as_integer(require(doc, "document", "n"), "n");
  if (n < 1) semantic_error("n", "must be at least 1");
  const Vector entries = as_number_array(require(doc, "document", "entries"), "entries");
  if (static_cast<index_t>(entries.size()) != n * n)
    semantic_error("entries", "length " + std::to_string(entries.size()) + ", expected n*n=" +
                                  std::to_string(n * n));
  Matrix C(n, n);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) C(i, j) = entries[static_cast<std::size_t>(i * n + j)];
  return C;
}

std::string write_matrix_document(const Matrix& C) {
  std::string out;
  out += "{\n";
  out += "  \"version\": 1,\n";
  out += "  \"n\": " + std::to_string(C.rows()) + ",\n";
  out += "  \"entries\": [";
  for (index_t i = 0; i < C.rows(); ++i) {
    out += i ? ",\n    " : "\n    ";
    for (index_t j = 0; j < C.cols(); ++j) {
      if (j) out += ", ";
      append_number(out, C(i, j));
    }
  }
  out += "\n  ]\n}\n";
  return out;
}

}  // namespace sdls
