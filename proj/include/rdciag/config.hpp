#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rdciag/apps.hpp"
#include "rdciag/solvers.hpp"

namespace rdciag {

enum class ProblemKind { best_approx, aug_l1, num };

struct ExperimentConfig {
  ProblemKind problem_kind = ProblemKind::best_approx;
  std::variant<BestApproxSpec, AugL1Spec, NumSpec> problem;

  Method method = Method::rdciag;
  bool alpha_auto = false;
  double alpha = 0.0;               // used when !alpha_auto
  std::optional<double> sigma;

  DelaySchedule delay;

  std::vector<std::uint64_t> seeds{1};
  long max_iter = 100000;
  double gap_tol = 1e-8;
  long record_every = 0;            // 0 -> max(1, max_iter / 10000)
  std::string reference;            // optional path
  std::string out_dir = "traces";
  bool timing = false;
};

struct ConfigError {
  int line = 0;  // 0 when not tied to a line
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;  // all of them, not just the first
  bool ok() const { return errors.empty() && config.has_value(); }
};

// Line-oriented `key = value` format with [problem]/[method]/[delay]/[run]
// sections. base_dir resolves relative matrix/reference paths.
ParseResult parse_config_text(const std::string& text,
                              const std::string& base_dir = ".");
ParseResult parse_config_file(const std::string& path);

std::string serialize_config(const ExperimentConfig& cfg);

// Whitespace-delimited numeric matrix file.
Matrix load_matrix_file(const std::string& path);
std::vector<double> load_vector_file(const std::string& path);

}  // namespace rdciag
