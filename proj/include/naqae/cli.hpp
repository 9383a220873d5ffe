#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace naqae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // error raised by a library module
inline constexpr int kExitUsage = 2;    // unknown command, bad or missing flag

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Results go to --out files when given, otherwise to `out`.
// Worker parallelism is capped by the NAQAE_THREADS environment variable
// (0 or unset = one worker per hardware thread).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace naqae::cli
