#pragma once

// Command-line front end shared by the czcount tool and the tests.
//
// Exit codes: 0 ok, 2 input error or bad usage, 3 capacity error, 4 anomaly.

#include <ostream>
#include <string>
#include <vector>

namespace cz {

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cz
