#pragma once

namespace slope {

// Entry point behind the slope binary. Exit codes: 0 success, 1 domain or
// data error, 2 usage error, 3 convergence-certificate failure.
int run_cli(int argc, const char* const* argv);

}  // namespace slope
