#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nl2sql::cli {

/// Exit codes: 0 success, 1 toolkit error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Errors are printed
/// to `err` as a single "error: <Kind>: <message>" line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nl2sql::cli
