#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sosgibbs::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kVerificationFailed = 3 };

// Runs one command line (args excludes the program name). Primary output goes
// to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sosgibbs::cli
