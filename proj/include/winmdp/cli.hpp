#pragma once

#include <string>
#include <vector>

namespace winmdp {

struct CliResult {
    // 0 threshold holds / success, 1 threshold fails, 2 usage or input error,
    // 3 inconclusive under the active cap.
    int exit_code = 0;
    std::string out;  // the result document (json), empty on usage errors
    std::string err;  // diagnostics and warnings
};

// Full command line driver, callable in process (the binary is a thin
// wrapper). args excludes the program name.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace winmdp
