#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fwg::cli {

/// Runs the command-line front end. Exit codes: 0 success, 2 input
/// validation, 3 precondition violation, 4 internal invariant failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fwg::cli
