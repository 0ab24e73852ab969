#include <cstdio>
#include <string>
#include <vector>

#include "winmdp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    winmdp::CliResult result = winmdp::run_cli(args);
    if (!result.out.empty()) fputs(result.out.c_str(), stdout);
    if (!result.err.empty()) fputs(result.err.c_str(), stderr);
    return result.exit_code;
}
