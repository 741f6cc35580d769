#pragma once

#include <exception>
#include <string>

#include "rtstab/config.hpp"

namespace rtstab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitHypothesis = 3,
  kExitInsufficientData = 4,
};

/// Maps an exception thrown by the library to a process exit status.
int exit_code_for(const std::exception& e) noexcept;

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
};

/// Executes the pipeline named by `cfg.subcommand`, writing every output
/// and manifest.json under `cfg.output_dir`. Errors are caught, reported
/// in the result and recorded in the manifest, which is then marked
/// incomplete.
RunResult run(const RunConfig& cfg);

}  // namespace rtstab
