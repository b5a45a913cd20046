// fpplab: run one experiment from an INI config.
//
//   fpplab <kind> --config PATH [--seed N] [--reps N] [--out DIR] [--gate] [--threads N] [--serial]
//   fpplab run --config PATH ...      (kind taken from the config)
//   fpplab check --config PATH        (parse and validate only)
//
// Exit status: 0 success, 1 gate failed (with --gate), 2 configuration error,
// 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpp/config.hpp"
#include "fpp/errors.hpp"
#include "fpp/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out = "out";
  bool gate = false;
  std::optional<int> threads;
  bool serial = false;
};

void add_flags(CLI::App* cmd, Flags& f, bool run_flags) {
  cmd->add_option("--config", f.config, "experiment config (INI)")->required()->check(CLI::ExistingFile);
  if (!run_flags) return;
  cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
  cmd->add_option("--reps", f.reps, "replications (overrides the config)");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_flag("--gate", f.gate, "exit 1 when a gate check fails");
  cmd->add_option("--threads", f.threads, "worker threads (0: OpenMP default)");
  cmd->add_flag("--serial", f.serial, "use the serial reference loop");
}

int execute(const Flags& f, std::optional<fpp::ExperimentKind> kind) {
  fpp::ExperimentConfig cfg = fpp::load_config(f.config);
  if (kind && cfg.kind != *kind)
    throw fpp::ConfigError("config kind '" + fpp::to_string(cfg.kind) + "' does not match subcommand '" +
                           fpp::to_string(*kind) + "'");
  if (f.seed) cfg.seed = *f.seed;
  if (f.reps) cfg.reps = *f.reps;
  if (f.threads) cfg.threads = *f.threads;
  if (f.serial) cfg.parallel = false;
  cfg.validate();

  const fpp::RunOutcome r = fpp::run_experiment(cfg, f.out);
  std::cout << fpp::to_string(cfg.kind) << " config_hash=" << cfg.hash_hex() << " wall=" << r.wall_seconds
            << "s\n";
  for (const auto& g : r.gate)
    std::cout << "  " << (g.passed ? "pass" : "FAIL") << ' ' << g.name << ": " << g.detail << '\n';
  if (r.incomplete) std::cout << "  incomplete: some replications failed\n";
  for (const auto& file : r.files) std::cout << "  wrote " << file << '\n';
  return f.gate && !r.gate_passed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation experiments"};
  app.require_subcommand(1);

  Flags flags;
  std::optional<fpp::ExperimentKind> chosen;
  bool check_only = false;

  for (const auto& name : fpp::experiment_kind_names()) {
    auto* cmd = app.add_subcommand(name, "run a " + name + " experiment");
    add_flags(cmd, flags, true);
    cmd->callback([&chosen, name] { chosen = fpp::parse_kind(name); });
  }
  auto* run = app.add_subcommand("run", "run the experiment named in the config");
  add_flags(run, flags, true);
  auto* check = app.add_subcommand("check", "parse and validate a config");
  add_flags(check, flags, false);
  check->callback([&check_only] { check_only = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (check_only) {
      const auto cfg = fpp::load_config(flags.config);
      std::cout << "ok " << fpp::to_string(cfg.kind) << " config_hash=" << cfg.hash_hex() << '\n';
      return 0;
    }
    return execute(flags, chosen);
  } catch (const fpp::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
