#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace beamforge {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitInfeasible = 2,
  kExitIo = 3,
};

// Runs one subcommand (gen, patterns, bound, emit-lp, solve, bench). `args`
// excludes the program name. Output that has no --out file goes to `out`;
// diagnostics are one line on `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace beamforge
