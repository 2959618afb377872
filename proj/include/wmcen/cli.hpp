#pragma once

#include <string>
#include <vector>

namespace wmcen {

/// Dispatches the command line (without the program name). Returns the
/// process exit code: 0 on success, nonzero with a diagnostic on stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace wmcen
