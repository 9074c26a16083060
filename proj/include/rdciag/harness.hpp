#pragma once

#include <string>
#include <vector>

#include "rdciag/config.hpp"
#include "rdciag/diagnostics.hpp"

namespace rdciag {

// Exit codes surfaced by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitValidation = 3;

struct ExperimentResult {
  int exit_code = kExitOk;
  std::string report;                 // flat key=value text block
  std::vector<std::string> trace_paths;
  std::vector<Trace> traces;          // one per seed, in seed order
};

// A problem plus the extra payloads the harness needs.
struct BuiltInstance {
  CompositeProblem problem;
  std::optional<KaczmarzData> kaczmarz;  // for aug_l1 problems
  std::vector<std::string> warnings;
};

BuiltInstance build_instance(const ExperimentConfig& cfg);

// Runs all seeds (concurrently, capped by RDCIAG_THREADS), writes one trace
// file per (method, seed), and assembles the rate report.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Same problem swept over several methods.
ExperimentResult run_compare(const ExperimentConfig& cfg,
                             const std::vector<Method>& methods);

}  // namespace rdciag
