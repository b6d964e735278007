#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaotun {

/// Exit codes of run_command.
enum ExitCode : int {
    exit_ok = 0,
    exit_runtime_error = 1,
    exit_config_error = 2,
    exit_usage = 64,
};

/// Executes one command line (without the program name). Human-readable
/// output goes to `out`; usage text and JSON error records go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace chaotun
