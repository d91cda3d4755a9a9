#pragma once

#include <string>
#include <vector>

namespace grig::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFormat = 4;
inline constexpr int kExitVerification = 5;
inline constexpr int kExitInternal = 70;

/// Runs the command line; args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace grig::cli
