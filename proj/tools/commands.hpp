#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "io.hpp"

namespace ompkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,
  kExitParse = 2,
  kExitInvariant = 3,
  kExitSolver = 4,
  kExitNotCptp = 5,
};

struct CommandResult {
  int exit_code = kExitOk;
  json report;
  std::string text;  ///< human-readable rendering, when the command has one
};

struct CommonOptions {
  Tolerances tol;
  bool timestamp = true;
};

struct FamilyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double box = 2.0;
  bool unital = false;
  std::optional<double> fixed_delta;
  std::optional<std::string> measurement;  ///< 1-based labels, e.g. "1,2"
};

struct ExamplesOptions {
  std::string corrupt;  ///< perturb the first golden value of this example
};

/// OMPKIT_SEED when set and valid, otherwise a fixed default.
std::uint64_t default_seed();

CommandResult cmd_solve(const std::string& ensemble_path, const std::optional<std::string>& measurement,
                        const CommonOptions& opts);
CommandResult cmd_check(const std::string& ensemble_path, const std::string& channel_path,
                        const std::optional<std::string>& weak, const CommonOptions& opts);
CommandResult cmd_family(const std::string& ensemble_path, const FamilyOptions& fam,
                         const CommonOptions& opts);
CommandResult cmd_examples(const ExamplesOptions& ex, const CommonOptions& opts);

/// Runs a command, turning exceptions into an error report and exit code.
CommandResult guarded(const std::string& command, const CommonOptions& opts,
                      const std::function<CommandResult()>& body);

}  // namespace ompkit::cli
