#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lexsimp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitProvider = 3;

/// Environment variable naming the remote inference endpoint.
inline constexpr const char* kEndpointEnv = "LEXSIMP_REMOTE_ENDPOINT";

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// progress, warnings and errors to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lexsimp::cli
