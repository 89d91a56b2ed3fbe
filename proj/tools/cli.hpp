#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace act::cli {

/// Runs one invocation. `args` excludes the program name. Returns 0 on
/// success, 1 on domain errors and 2 on usage errors; failures print a single
/// `error: <token>: <message>` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace act::cli
