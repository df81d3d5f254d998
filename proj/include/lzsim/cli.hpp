#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lzsim {

/// Process exit codes of the lzsim tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// Runs the command line `lzsim <args...>` (args excludes the program name).
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int cli_main(int argc, char **argv);

} // namespace lzsim
