#pragma once

#include <iosfwd>

namespace reqclass {

/// Entry point for the `reqclass` tool. Data goes to `out`, diagnostics to `err`.
/// Returns the process exit code (0 iff no error).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reqclass
