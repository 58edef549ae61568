#pragma once

#include <ostream>

#include "memsfield/config.hpp"

namespace memsfield {

/// CLI exit codes.
enum ExitCode {
  kOk = 0,
  kInadmissible = 2,
  kNoConvergence = 3,
  kMalformedInput = 4,
};

/// Executes one command ("admissible", "solve", "verify", "refine-study",
/// "stability-study", "kappa-study"), writes artifacts into cfg.out_dir, and
/// returns an exit code. Failures emit a single machine-parsable line
/// `error: <reason>` on `diag`.
int run_command(const std::string& command, const RunConfig& cfg,
                std::ostream& diag);

/// Profile selected by the config (CSV path wins over builtin name).
Profile profile_from_config(const RunConfig& cfg);

}  // namespace memsfield
