#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pltk {

/// Runs the command line (without the program name) and returns the exit
/// code: 0 success, 1 usage, 2 input or validation, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pltk
