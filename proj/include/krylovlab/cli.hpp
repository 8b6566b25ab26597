#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace klab {

/// Full command-line surface, callable in-process. Tables go to --output or
/// `out`; progress and errors go to `err`. Returns the process exit code:
/// 0 success, 2 invalid configuration, 3 numeric domain error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace klab
