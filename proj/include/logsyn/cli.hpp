#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace logsyn::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInput = 2,
    kExitBackend = 3,
    kExitInternal = 4,
};

/// Entry point behind the `logsyn` executable. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace logsyn::cli
