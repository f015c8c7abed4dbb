#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rainbow::cli {

/// Runs the command line tool. Output files go to --out, or to `out` when
/// no path is given; diagnostics go to `err`. Returns the process exit code:
/// 0 ok, 2 invalid configuration, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the program name omitted from `args`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rainbow::cli
