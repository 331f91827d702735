// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace codegraph {

struct CommandResult {
    /// Exit status; 128+signal for signal deaths, -1 when unknown.
    int exit_code = -1;
    bool timed_out = false;
    /// Interleaved stdout and stderr.
    std::string output;
};

/// Runs `command` through /bin/sh -c in `cwd`, capturing combined output.
/// The child gets its own process group; on timeout the whole group is
/// killed and timed_out is set. Throws TransportError when the process
/// cannot be spawned at all.
CommandResult run_command(const std::string& command, const std::string& cwd,
                          int timeout_seconds);

} // namespace codegraph
