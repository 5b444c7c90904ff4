#pragma once

namespace dmdt {

/// Entry point shared by the dmdtrade binary and the integration tests.
/// Returns the process exit code: 0 success, 1 validation error,
/// 2 data error, 3 numerical error.
int run_cli(int argc, const char* const* argv);

}  // namespace dmdt
