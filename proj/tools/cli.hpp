#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glcmsample::cli {

/// Runs one CLI invocation. Data goes to files or `out`, diagnostics to `err`.
/// Returns 0 on success and 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glcmsample::cli
