#ifndef RELX_TOOLS_CLI_HPP
#define RELX_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace relx::cli {

// Runs the relx command line; args[0] is the program name. Returns the
// process exit code: 0 success, 1 validation or usage error, 2 I/O or
// protocol error. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relx::cli

#endif  // RELX_TOOLS_CLI_HPP
