#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carleman {

/// Exit codes of the command-line front end.
enum exit_code : int {
    exit_ok = 0,
    exit_invariant_fail = 1,
    exit_not_normal = 2,
    exit_grid_mismatch = 3,
    exit_unknown_symbol = 4,
    exit_sector_violation = 5,
    exit_usage = 64,
};

/// Runs one CLI invocation (synth | decompose | mercer | calculus | verify);
/// returns the exit code. Output goes to the supplied streams so tests can
/// capture it.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace carleman
