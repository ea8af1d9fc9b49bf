#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "zsspec/config.hpp"

namespace zsspec {

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_audit_failed = 2 };

struct RunOutcome {
    int exit_code = exit_ok;
    std::vector<std::string> artifacts;  ///< paths written, in write order
    std::string error;                   ///< set when exit_code == exit_error
};

/// Runs one configured pipeline and writes its artifacts under `out_dir`.
/// Computational failures are reported as exit_error with the failing stage named.
RunOutcome run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace zsspec
