#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swarmcrit {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumeric = 2 };

/// Runs one subcommand. `args` excludes the program name. Results go to the
/// file named by --output when given, otherwise to `out`; diagnostics and
/// usage text go to `err`. No output file is created unless the subcommand
/// succeeds.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarmcrit
