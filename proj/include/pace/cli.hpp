#pragma once

#include <string>
#include <vector>

namespace pace {

/// Exit codes: 0 success, 1 analysis/data error, 2 usage error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without argv[0]

} // namespace pace
