#ifndef MBRL_TOOLS_CLI_H_
#define MBRL_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace mbrl::cli {

// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
// Errors are reported as a single "error: <kind>: <detail>" line on `err`.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace mbrl::cli

#endif  // MBRL_TOOLS_CLI_H_
