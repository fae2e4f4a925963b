#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ompkit/errors.hpp"

using namespace ompkit::cli;

int main(int argc, char** argv) {
  CLI::App app{"ompkit: minimum-error discrimination and OMP channels for qubit ensembles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", OMPKIT_VERSION);

  CommonOptions common;
  bool no_timestamp = false;
  std::optional<double> tol_all;
  std::string output;
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from reports");
  app.add_option("--tol", tol_all, "Set every tolerance at once");
  app.add_option("--psd-tol", common.tol.psd_tol, "Eigenvalue slack")->capture_default_str();
  app.add_option("--rank-tol", common.tol.rank_tol, "Relative singular-value cutoff")
      ->capture_default_str();
  app.add_option("--match-tol", common.tol.match_tol, "Equation residual threshold")
      ->capture_default_str();
  app.add_option("-o,--output", output, "Write the report to a file instead of stdout");

  auto* solve = app.add_subcommand("solve", "Solve minimum-error discrimination");
  std::string ensemble_path, channel_path;
  std::optional<std::string> measurement, weak;
  solve->add_option("ensemble", ensemble_path, "Ensemble file")->required();
  solve->add_option("--measurement", measurement, "Validate a measurement on these states (1-based)");

  auto* check = app.add_subcommand("check", "Test whether a channel preserves an optimal measurement");
  check->add_option("ensemble", ensemble_path, "Ensemble file")->required();
  check->add_option("channel", channel_path, "Channel file")->required();
  check->add_option("--weak", weak, "Measurement identifying these states (1-based)");

  auto* family = app.add_subcommand("family", "Construct and sample the OMP channel family");
  FamilyOptions fam;
  fam.seed = default_seed();
  family->add_option("ensemble", ensemble_path, "Ensemble file")->required();
  family->add_option("--samples", fam.samples, "Number of sieve draws")->capture_default_str();
  family->add_option("--seed", fam.seed, "Sieve RNG seed (default: OMPKIT_SEED or built-in)");
  family->add_option("--box", fam.box, "Coefficient half-width")->capture_default_str();
  family->add_flag("--unital", fam.unital, "Restrict to t = 0");
  family->add_option("--fixed-delta", fam.fixed_delta, "Restrict to one guessing degradation");
  family->add_option("--measurement", fam.measurement, "Measurement identifying these states (1-based)");

  auto* examples = app.add_subcommand("examples", "Run the built-in reference examples");
  ExamplesOptions ex;
  bool as_json = false;
  examples->add_flag("--json", as_json, "Print the machine-readable report");
  examples->add_option("--corrupt", ex.corrupt, "Perturb one golden value of this example (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }
  if (tol_all) common.tol = {*tol_all, *tol_all, *tol_all};
  common.timestamp = !no_timestamp;

  std::string name;
  std::function<CommandResult()> body;
  if (*solve) {
    name = "solve";
    body = [&] { return cmd_solve(ensemble_path, measurement, common); };
  } else if (*check) {
    name = "check";
    body = [&] { return cmd_check(ensemble_path, channel_path, weak, common); };
  } else if (*family) {
    name = "family";
    body = [&] { return cmd_family(ensemble_path, fam, common); };
  } else {
    name = "examples";
    body = [&] { return cmd_examples(ex, common); };
  }
  auto validated = [&]() -> CommandResult {
    try {
      common.tol.validate();
    } catch (const ompkit::BadParameter& e) {
      throw ParseError(e.what());
    }
    return body();
  };

  const CommandResult res = guarded(name, common, validated);
  const std::string text =
      (name == "examples" && !as_json && !res.text.empty()) ? res.text : dump(res.report) + "\n";
  if (res.report.contains("error") && res.text.empty()) std::cerr << dump(res.report["error"]) << "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return kExitParse;
    }
    out << text;
  }
  return res.exit_code;
}
