#pragma once

namespace cekm {

// Dispatches the command line and returns the process exit code:
// 0 success, 1 usage error, 2 data error, 3 numeric/guard error.
int run_cli(int argc, const char* const* argv);

}  // namespace cekm
