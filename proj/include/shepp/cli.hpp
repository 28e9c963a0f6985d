#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shepp {

/// Runs one command. `args` excludes the program name. Results go to --out
/// when given, else to `out`; progress and diagnostics go to `err`.
/// Returns 0 on success, 1 on computation failure, 2 on argument errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shepp
