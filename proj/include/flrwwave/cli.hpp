#ifndef FLRWWAVE_CLI_HPP
#define FLRWWAVE_CLI_HPP

#include <string>
#include <vector>

namespace flrw::cli {

// Entry point behind the command-line binary; args excludes the program name.
// Returns 0 on success, 1 on domain/runtime errors, 2 on usage errors.
int run(const std::vector<std::string>& args);

}  // namespace flrw::cli

#endif
