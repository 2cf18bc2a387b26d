#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lienard::cli {

/// Exit codes: 0 ok, 1 internal error, 2 input, 3 numerics, 4 obstruction.
enum ExitCode { ok = 0, internal = 1, input = 2, numerics = 3, obstruction = 4 };

/// Runs the command line (args[0] is the program name). Reports go to `out`
/// unless an --out path is given; error JSON goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lienard::cli
