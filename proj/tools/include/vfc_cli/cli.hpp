#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vfc::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kConfigError = 2 };

/// Runs one `vfc` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vfc::cli
