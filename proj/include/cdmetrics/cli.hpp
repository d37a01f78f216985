#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kValidation = 3,
    kData = 4,
    kReproduction = 5,
};

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cdm::cli
