#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stackheight::cli {

/// Exit codes: 0 success, 1 invalid fan, 2 usage, parse or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stackheight::cli
