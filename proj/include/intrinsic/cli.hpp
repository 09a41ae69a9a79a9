#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "intrinsic/arbitrage.hpp"

namespace intrinsic {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_domain = 2, exit_config = 3 };

/// Dispatches one subcommand; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

/// Reads a `strike,price` CSV ('#' lines skipped) into a curve.
CallCurve read_curve_csv(const std::string& path, double s0, double DT);

}  // namespace intrinsic
