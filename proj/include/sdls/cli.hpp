#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdls {

/// Entry point behind main(): takes argv-style arguments (program name
/// excluded) and runs one subcommand of
///
///   solve <file>     solve a problem file, write the solution document
///   check <file>     validate a problem file, print a summary
///   nearcorr <file>  turn a matrix document into a problem document
///
/// Documents go to `out` unless -o redirects them to a file; progress and
/// diagnostics go to `err`. Returns 0 on success, 1 on usage or input
/// errors, 2 when a solve finished without converging (the solution
/// document is still written).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdls
