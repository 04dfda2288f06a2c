#pragma once

// Command-line front end. Subcommands: simulate, analyze, verify-curve,
// extract-ray, estimate-delta, demo-l2, sweep.

#include <iosfwd>
#include <string>
#include <vector>

namespace geolab {

enum ExitCode : int {
  kExitOk = 0,
  kExitCertificateFailed = 1,
  kExitUsage = 2,
  kExitStrategyFault = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geolab
