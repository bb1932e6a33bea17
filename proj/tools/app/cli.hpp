#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wavesearch::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "WAVESEARCH_OUTPUT_DIR";

/// Full command-line entry point. `args` excludes the program name. Failures
/// print one JSON line {"error": ..., "kind": ..., "message": ...} to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavesearch::app
