#ifndef DSHAP_TOOLS_CLI_H_
#define DSHAP_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dshap::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kUsageError = 2;

// `args` excludes the program name. Errors are written to `err` as one JSON
// object {"error": CODE, "message": ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dshap::cli

#endif  // DSHAP_TOOLS_CLI_H_
