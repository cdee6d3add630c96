#pragma once

#include <string>
#include <vector>

namespace looprate {

struct CliResult {
    int exit_code = 0;
    std::string out;
};

// Run one CLI invocation (arguments without the program name).  All output,
// including machine-readable error objects, lands in `out`.
CliResult run_cli(const std::vector<std::string>& args);

int cli_main(int argc, char** argv);

}  // namespace looprate
