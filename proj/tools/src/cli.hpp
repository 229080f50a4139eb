#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rlasso::cli {

// Exit codes: 0 success, 2 configuration, 3 data, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlasso::cli
