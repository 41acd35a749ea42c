// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <ostream>
#include <string>
#include <vector>

namespace ricsim::cli {

/// Set by the signal handler; long-running subcommands poll it.
extern std::atomic<bool> stop_requested;

/// Runs one subcommand. args excludes the program name. Returns the process
/// exit code: 0 ok, 1 runtime failure (e.g. broker unreachable), 2 bad
/// usage, unreadable or invalid input.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ricsim::cli
