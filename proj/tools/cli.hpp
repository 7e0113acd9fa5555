#pragma once

namespace cuspforge::cli {

// Exit codes: 0 success, 1 failed postcondition or verify assertion,
// 2 usage or missing input, 3 LineSearchStall, 4 Infeasible.
int run_cli(int argc, const char* const* argv);

}  // namespace cuspforge::cli
