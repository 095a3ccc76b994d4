#ifndef WACHSPRESS_TOOLS_CLI_HPP
#define WACHSPRESS_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace wachspress::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { ok = 0, usage_error = 1, domain_error = 2 };

/// Runs one command line (args excludes the program name) and returns the
/// process exit code. All output goes to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wachspress::cli

#endif
