#pragma once

#include <string>
#include <vector>

namespace lrp {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitResource = 3,
};

/// Entry point of the `lrp` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace lrp
