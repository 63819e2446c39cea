#pragma once

namespace heatfock {

/// Entry point of the `heatfock` tool. Returns 0 when every check passes,
/// 1 when a check fails and 2 for usage or config errors.
int run_cli(int argc, const char* const* argv);

}  // namespace heatfock
