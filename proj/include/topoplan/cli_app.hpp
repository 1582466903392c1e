#pragma once

namespace topoplan {

// Entry point for the command line front end. Exit codes: 0 success,
// 1 input error, 2 pipeline failure.
int run_cli(int argc, const char* const* argv);

}  // namespace topoplan
