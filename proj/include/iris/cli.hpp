#pragma once

#include <string>
#include <vector>

namespace iris {

// Entry point behind the `iris` binary. Exit codes: 0 success, 2 usage or
// config error, 3 data error, 4 runtime error.
int run_cli(const std::vector<std::string>& args);

}  // namespace iris
