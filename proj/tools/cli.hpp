#ifndef UBOCO_TOOLS_CLI_HPP
#define UBOCO_TOOLS_CLI_HPP

#include <string>
#include <vector>

namespace uboco::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kIo = 4 };

/// Runs one subcommand; argv[0] is the program name. Diagnostics go to stderr.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace uboco::cli

#endif  // UBOCO_TOOLS_CLI_HPP
