#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace qot {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitNumeric = 3 };

/// Flat `key = value` config file; '#' starts a comment line.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Entry point behind the `qot` binary. Subcommands: couple, estimate, table2,
/// solve, verify. Output goes to `out` unless a file is requested.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qot
