// Command logic of the ulamkit tool, kept out of main() so tests can drive
// it in-process.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ulamkit/model.hpp"

namespace ulamkit::cli {

enum ExitCode : int {
  kStable = 0,
  kInputError = 1,
  kInconclusive = 2,
  kInstability = 3,
};

int exit_code(Verdict v);

struct SolveRhoSpec {
  double t0 = 0.0;
  Complex rho0{};
};
/// "t0=0.5,rho0=-2[,rho0_im=0]". Throws InvalidInput.
SolveRhoSpec parse_solve_rho(const std::string& text);

/// Runs the tool on argv[1..]; the report goes to `out`, diagnostics and
/// error objects to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ulamkit::cli
