#ifndef MEETWALK_TOOLS_CLI_HPP
#define MEETWALK_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace meetwalk::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kValidation = 2, kBudget = 3, kIo = 4 };

/// Runs the meetwalk command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meetwalk::cli

#endif  // MEETWALK_TOOLS_CLI_HPP
