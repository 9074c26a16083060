#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdciag/checks.hpp"
#include "rdciag/harness.hpp"
#include "rdciag/parallel.hpp"
#include "rdciag/trace_io.hpp"

namespace {

int report_parse_errors(const rdciag::ParseResult& parsed) {
  for (const auto& e : parsed.errors) std::cerr << "error: " << e.message << "\n";
  return rdciag::kExitValidation;
}

int cmd_solve(const std::string& config_path) {
  auto parsed = rdciag::parse_config_file(config_path);
  if (!parsed.ok()) return report_parse_errors(parsed);
  try {
    rdciag::ExperimentResult res = rdciag::run_experiment(*parsed.config);
    std::cout << res.report;
    for (const auto& p : res.trace_paths) std::cout << "trace = " << p << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rdciag::kExitValidation;
  }
}

int cmd_compare(const std::string& config_path, const std::string& methods) {
  auto parsed = rdciag::parse_config_file(config_path);
  if (!parsed.ok()) return report_parse_errors(parsed);
  std::vector<rdciag::Method> ms;
  std::string item;
  std::istringstream ss(methods);
  while (std::getline(ss, item, ',')) {
    if (item == "rdciag") ms.push_back(rdciag::Method::rdciag);
    else if (item == "dbcd") ms.push_back(rdciag::Method::dbcd);
    else if (item == "dual_pg") ms.push_back(rdciag::Method::dual_pg);
    else if (item == "piag") ms.push_back(rdciag::Method::piag);
    else if (item == "sparse_kaczmarz")
      ms.push_back(rdciag::Method::sparse_kaczmarz);
    else {
      std::cerr << "error: unknown method '" << item << "'\n";
      return rdciag::kExitValidation;
    }
  }
  if (ms.empty()) {
    std::cerr << "error: --methods list is empty\n";
    return rdciag::kExitValidation;
  }
  try {
    rdciag::ExperimentResult res = rdciag::run_compare(*parsed.config, ms);
    std::cout << res.report;
    for (const auto& p : res.trace_paths) std::cout << "trace = " << p << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rdciag::kExitValidation;
  }
}

int cmd_rate(const std::vector<std::string>& traces, double burn_in) {
  int bad = 0;
  for (const auto& path : traces) {
    try {
      rdciag::Trace t = rdciag::read_trace_csv(path);
      bool has_gamma = false;
      for (const auto& r : t.rows)
        if (!std::isnan(r.gamma)) has_gamma = true;
      rdciag::RateReport rep = rdciag::fit_linear_rate(
          t, has_gamma ? rdciag::TraceField::gamma : rdciag::TraceField::gap,
          burn_in, 1.0);
      std::cout << "trace = " << path << "\n";
      std::cout << "field = " << (has_gamma ? "gamma" : "gap") << "\n";
      std::printf("empirical_rate = %.10g\n", rep.empirical_rate);
      std::printf("r_squared = %.10g\n", rep.r_squared);
      std::cout << "burn_in = " << rep.burn_in << "\n";
      std::cout << "used_rows = " << rep.used_rows << "\n\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << path << ": " << e.what() << "\n";
      bad = 1;
    }
  }
  return bad;
}

int cmd_check(const std::string& filter) {
  auto results = rdciag::checks::run_all(filter);
  long passed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.cases
              << " cases)";
    if (!r.details.empty()) std::cout << " " << r.details;
    std::cout << "\n";
    if (r.pass) ++passed;
  }
  std::cout << passed << "/" << results.size() << " checks passed\n";
  return passed == static_cast<long>(results.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  rdciag::parallel::init_from_env();

  CLI::App app{"dual decomposition solvers with delayed aggregated gradients"};
  app.require_subcommand(1);

  std::string config_path, methods, filter;
  std::vector<std::string> trace_paths;
  double burn_in = 0.2;

  CLI::App* solve = app.add_subcommand("solve", "run one experiment config");
  solve->add_option("config", config_path, "config file")->required();

  CLI::App* compare =
      app.add_subcommand("compare", "sweep methods over one problem");
  compare->add_option("config", config_path, "config file")->required();
  compare->add_option("--methods", methods, "comma-separated method list")
      ->required();

  CLI::App* rate = app.add_subcommand("rate", "fit rates on existing traces");
  rate->add_option("traces", trace_paths, "trace csv files")->required();
  rate->add_option("--burn-in", burn_in, "fraction of rows to drop");

  CLI::App* check = app.add_subcommand("check", "run the property suite");
  check->add_option("--filter", filter, "substring filter on check names");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return cmd_solve(config_path);
  if (compare->parsed()) return cmd_compare(config_path, methods);
  if (rate->parsed()) return cmd_rate(trace_paths, burn_in);
  if (check->parsed()) return cmd_check(filter);
  return 0;
}
