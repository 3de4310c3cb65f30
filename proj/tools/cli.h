#ifndef TOXATTACK_TOOLS_CLI_H_
#define TOXATTACK_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace toxattack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one `toxattack` invocation; `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace toxattack::cli

#endif  // TOXATTACK_TOOLS_CLI_H_
