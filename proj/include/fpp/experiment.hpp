#pragma once

#include <string>
#include <vector>

#include "fpp/config.hpp"

namespace fpp {

constexpr int kSchemaVersion = 1;

struct GateCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunOutcome {
  std::vector<GateCheck> gate;
  bool incomplete = false;  // some replications failed
  std::vector<std::string> files;
  double wall_seconds = 0.0;

  bool gate_passed() const;
};

// Runs one experiment and writes into out_dir:
//   records.csv   per-replication values (deterministic)
//   summary.json  fitted quantities, CIs, gate checks, config echo (deterministic)
//   timing.json   wall time and thread count (not deterministic)
// plus kind-specific artifacts. The directory is created when missing.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace fpp
