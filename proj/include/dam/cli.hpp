#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dam::cli {

enum ExitCode : int { success = 0, infeasible = 2, limit = 3, input_error = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace dam::cli
