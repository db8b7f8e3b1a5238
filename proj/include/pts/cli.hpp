#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pts {

/// Entry point of the `pts` command. Returns the exit status: 0 exactly when
/// no error was reported.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pts
