#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrl::cli {

/// Entry point shared by the mrl binary and the test suite.
///
/// args holds everything after the program name. Returns the process
/// exit code: 0 success, 2 usage or model-spec parse error, 3 numeric
/// or convergence failure. Rows go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrl::cli
