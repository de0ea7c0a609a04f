#include "sdls/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdls/problem_io.hpp"
#include "sdls/solver.hpp"

namespace sdls {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& output_path, std::ostream& out) {
  if (output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(output_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write \"" + output_path + "\"");
  f << text;
}

void describe_cone(const ConeSpec& K, std::ostream& os) {
  os << "K: free=" << K.n_free << ", nonneg=" << K.n_nonneg << ", soc=[";
  for (std::size_t i = 0; i < K.soc_dims.size(); ++i)
    os << (i ? ", " : "") << K.soc_dims[i];
  os << "], psd=[";
  for (std::size_t i = 0; i < K.psd_dims.size(); ++i)
    os << (i ? ", " : "") << K.psd_dims[i];
  os << "]\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conic least squares via the projected dual"};
  app.require_subcommand(1);

  std::string input, output_path;
  double eps = 0.0, reg = 0.0;
  index_t maxit = 0;
  bool no_scaling = false, quiet = false, include_H = false;

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve a problem file and write the solution document");
  solve_cmd->add_option("input", input, "problem file")->required();
  CLI::Option* eps_opt =
      solve_cmd->add_option("--eps", eps, "relative accuracy of the primal residual");
  CLI::Option* maxit_opt = solve_cmd->add_option("--maxit", maxit, "iteration cap");
  CLI::Option* reg_opt = solve_cmd->add_option("--reg", reg, "Tikhonov weight on the dual");
  solve_cmd->add_flag("--no-scaling", no_scaling, "skip the max(1,||b||) data scaling");
  solve_cmd->add_flag("--quiet", quiet, "suppress progress output");
  solve_cmd->add_flag("--include-H", include_H,
                      "write the inverse-Hessian approximation into the solution");
  solve_cmd->add_option("-o,--output", output_path, "write the solution here, not stdout");

  CLI::App* check_cmd = app.add_subcommand("check", "Validate a problem file");
  check_cmd->add_option("input", input, "problem file")->required();

  CLI::App* near_cmd = app.add_subcommand(
      "nearcorr", "Emit the nearest-correlation-matrix problem for a matrix document");
  near_cmd->add_option("input", input, "matrix document file")->required();
  near_cmd->add_option("-o,--output", output_path, "write the problem here, not stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      ParsedProblem parsed = read_problem(slurp(input));
      Params pars = parsed.pars.value_or(Params{});
      if (eps_opt->count()) pars.eps = eps;
      if (maxit_opt->count()) pars.maxit = maxit;
      if (reg_opt->count()) pars.reg = reg;
      if (no_scaling) pars.scaling = false;
      if (quiet) pars.fid = false;

      Solution sol = solve(parsed.problem, pars, &err);
      emit(write_solution(sol, include_H), output_path, out);
      return sol.info.status == BfgsStatus::Converged ? 0 : 2;
    }

    if (check_cmd->parsed()) {
      ParsedProblem parsed = read_problem(slurp(input));
      const Problem& p = parsed.problem;
      out << "valid problem: m=" << p.A.nrows() << ", n=" << p.A.ncols()
          << ", nnz=" << p.A.nnz() << "\n";
      if (p.K)
        describe_cone(*p.K, out);
      else
        out << "K: all free (n=" << p.A.ncols() << ")\n";
      out << "c: " << (p.c ? "given" : "zero (default)") << "\n";
      if (parsed.pars) {
        const Params& q = *parsed.pars;
        out << "pars: eps=" << q.eps << ", fid=" << (q.fid ? "on" : "off")
            << ", maxit=" << q.maxit << ", reg=" << q.reg
            << ", scaling=" << (q.scaling ? "on" : "off") << "\n";
      }
      return 0;
    }

    // nearcorr
    Matrix C = read_matrix_document(slurp(input));
    emit(write_problem(build_nearcorr_problem(C)), output_path, out);
    return 0;
  } catch (const ParseError& e) {
    err << input << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sdls
