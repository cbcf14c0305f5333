#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fibra::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDomain = 2;

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out` as canonical JSON, usage problems to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fibra::cli
