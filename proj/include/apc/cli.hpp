#pragma once

namespace apc {

/// Entry point of the `apc` command line tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv);

/// Version string baked in at configure time (git describe when available).
const char* version();

}  // namespace apc
