#include "rdciag/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "rdciag/parallel.hpp"
#include "rdciag/trace_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rdciag {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::best_approx: return "best_approx";
    case ProblemKind::aug_l1: return "aug_l1";
    case ProblemKind::num: return "num";
  }
  return "?";
}

}  // namespace

BuiltInstance build_instance(const ExperimentConfig& cfg) {
  BuiltInstance out;
  BuildNotes notes;
  switch (cfg.problem_kind) {
    case ProblemKind::best_approx:
      out.problem =
          build_best_approximation(std::get<BestApproxSpec>(cfg.problem), &notes);
      break;
    case ProblemKind::aug_l1: {
      const auto& spec = std::get<AugL1Spec>(cfg.problem);
      out.problem = build_augmented_l1(spec, &notes);
      out.kaczmarz = KaczmarzData{spec.A, spec.b, spec.lambda};
      break;
    }
    case ProblemKind::num:
      out.problem = build_num(std::get<NumSpec>(cfg.problem), &notes);
      break;
  }
  out.warnings = std::move(notes.warnings);
  return out;
}

namespace {

struct Resolved {
  double alpha = 0.0;
  double sigma = 0.0;
  std::string sigma_source = "none";
  std::optional<ProblemConstants> constants;
  std::optional<ReferenceSolution> ref;
};

Resolved resolve_run_parameters(const ExperimentConfig& cfg,
                                const CompositeProblem& p,
                                std::vector<std::string>& warnings) {
  Resolved r;
  if (!cfg.reference.empty()) r.ref = load_reference(cfg.reference, p);

  if (cfg.sigma) {
    r.sigma = *cfg.sigma;
    r.sigma_source = "config";
  } else if (r.ref) {
    auto probes = make_probe_points(p, *r.ref, 256, 0xC0FFEEull);
    r.sigma = estimate_sigma(p, *r.ref, probes);
    r.sigma_source = "estimated";
    if (r.sigma <= 0.0)
      warnings.push_back("sigma estimate is not positive; step-size rule and "
                         "rate are not meaningful");
  }

  if (cfg.method == Method::sparse_kaczmarz) {
    r.alpha = 0.0;
    return r;
  }

  if (r.sigma > 0.0) {
    r.constants = compute_constants(p, cfg.delay.tau_max, r.sigma,
                                    cfg.alpha_auto ? -1.0 : cfg.alpha);
  }
  if (cfg.alpha_auto) {
    if (!r.constants || r.constants->alpha_max <= 0.0)
      throw std::runtime_error(
          "alpha = auto needs a positive sigma (config or estimate)");
    r.alpha = r.constants->alpha_max;
  } else {
    r.alpha = cfg.alpha;
  }
  return r;
}

void append_constants(std::ostringstream& rep, const ProblemConstants& c) {
  double ell_sum = 0.0;
  for (double l : c.ell) ell_sum += l;
  rep << "ell_max = " << fmt(c.ell_max) << "\n";
  rep << "ell_sum = " << fmt(ell_sum) << "\n";
  rep << "eta1 = " << fmt(c.eta1) << "\n";
  rep << "eta2 = " << fmt(c.eta2) << "\n";
  rep << "beta = " << fmt(c.beta) << "\n";
  rep << "z0 = " << fmt(c.z0) << "\n";
  rep << "alpha_max = " << fmt(c.alpha_max) << "\n";
  rep << "theoretical_rate = " << fmt(c.rate) << "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  std::vector<std::string> warnings;

  BuiltInstance inst = build_instance(cfg);
  const CompositeProblem& p = inst.problem;
  warnings.insert(warnings.end(), inst.warnings.begin(), inst.warnings.end());

  Resolved res = resolve_run_parameters(cfg, p, warnings);
  if (cfg.method == Method::sparse_kaczmarz && !inst.kaczmarz)
    throw std::runtime_error("sparse_kaczmarz needs an aug_l1 problem");

  const int n_seeds = static_cast<int>(cfg.seeds.size());
  result.traces.resize(n_seeds);
  std::vector<std::string> failures(n_seeds);

  int threads = std::min(parallel::num_threads(), n_seeds);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int s = 0; s < n_seeds; ++s) {
    RunOptions opts;
    opts.method = cfg.method;
    opts.schedule = cfg.delay;
    opts.alpha = res.alpha;
    opts.seed = cfg.seeds[s];
    opts.stop = {cfg.max_iter, cfg.gap_tol, cfg.record_every};
    opts.ref = res.ref ? &*res.ref : nullptr;
    opts.kaczmarz = inst.kaczmarz ? &*inst.kaczmarz : nullptr;
    opts.timing = cfg.timing;
    try {
      result.traces[s] = run(p, opts);
    } catch (const DivergenceError& e) {
      failures[s] = e.what();
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  std::ostringstream rep;
  rep << "problem = " << kind_name(cfg.problem_kind) << "\n";
  rep << "method = " << method_name(cfg.method) << "\n";
  rep << "nI = " << p.nI() << "\n";
  rep << "nJ = " << p.nJ() << "\n";
  rep << "tau = " << cfg.delay.tau_max << "\n";
  rep << "alpha = " << fmt(res.alpha) << "\n";
  rep << "sigma = " << fmt(res.sigma) << "\n";
  rep << "sigma_source = " << res.sigma_source << "\n";
  if (res.constants) append_constants(rep, *res.constants);

  bool diverged = false;
  for (int s = 0; s < n_seeds; ++s) {
    if (!failures[s].empty()) {
      diverged = true;
      rep << "seed_" << cfg.seeds[s] << "_error = " << failures[s] << "\n";
      continue;
    }
    std::string path = cfg.out_dir + "/" + kind_name(cfg.problem_kind) + "_" +
                       method_name(cfg.method) + "_seed" +
                       std::to_string(cfg.seeds[s]) + ".csv";
    write_trace_csv(result.traces[s], path);
    result.trace_paths.push_back(path);
  }

  // per-seed empirical rates and the seed-mean decay
  bool use_gamma = res.ref.has_value() &&
                   cfg.method != Method::sparse_kaczmarz;
  rep << "rate_field = " << (use_gamma ? "gamma" : "gap") << "\n";
  double theo = res.constants ? res.constants->rate : 1.0;

  std::vector<double> seed_rates;
  for (int s = 0; s < n_seeds; ++s) {
    if (!failures[s].empty()) continue;
    try {
      RateReport rr = fit_linear_rate(
          result.traces[s], use_gamma ? TraceField::gamma : TraceField::gap,
          0.2, theo);
      seed_rates.push_back(rr.empirical_rate);
      rep << "seed_" << cfg.seeds[s] << "_rate = " << fmt(rr.empirical_rate)
          << "\n";
      rep << "seed_" << cfg.seeds[s] << "_r2 = " << fmt(rr.r_squared) << "\n";
    } catch (const InsufficientDataError&) {
      rep << "seed_" << cfg.seeds[s] << "_rate = nan\n";
    }
  }
  if (!seed_rates.empty()) {
    double m = 0.0;
    for (double r : seed_rates) m += r;
    rep << "mean_empirical_rate = " << fmt(m / seed_rates.size()) << "\n";
  }

  // seed-mean sequence on the shared record grid
  if (!diverged && n_seeds > 0 && failures[0].empty()) {
    size_t rows = result.traces[0].rows.size();
    bool aligned = true;
    for (const auto& t : result.traces)
      if (t.rows.size() != rows) aligned = false;
    if (aligned && rows > 0) {
      std::vector<long> ks(rows);
      std::vector<double> mean(rows, 0.0);
      for (size_t r = 0; r < rows; ++r) {
        ks[r] = result.traces[0].rows[r].k;
        for (const auto& t : result.traces)
          mean[r] += use_gamma ? t.rows[r].gamma : t.rows[r].gap;
        mean[r] /= n_seeds;
      }
      try {
        RateReport rr = fit_linear_rate(ks, mean, 0.2, theo);
        rep << "seed_mean_rate = " << fmt(rr.empirical_rate) << "\n";
        rep << "seed_mean_r2 = " << fmt(rr.r_squared) << "\n";
        rep << "seed_mean_burn_in = " << rr.burn_in << "\n";
      } catch (const InsufficientDataError&) {
        rep << "seed_mean_rate = nan\n";
      }
    }
  }

  // empirical iterate ball (upper bound via the reference when present)
  if (res.ref) {
    double r_ball = 0.0;
    double ystar_norm = norm(res.ref->y_star);
    for (const auto& t : result.traces)
      for (const auto& row : t.rows)
        if (!std::isnan(row.dist2))
          r_ball = std::max(r_ball, std::sqrt(row.dist2) + ystar_norm);
    rep << "iterate_ball_radius_bound = " << fmt(r_ball) << "\n";
  }

  double worst_gap = 0.0;
  for (int s = 0; s < n_seeds; ++s)
    if (failures[s].empty() && !result.traces[s].rows.empty())
      worst_gap = std::max(worst_gap, result.traces[s].rows.back().gap);
  rep << "final_gap_max = " << fmt(worst_gap) << "\n";

  for (const auto& w : warnings) rep << "warning = " << w << "\n";
  result.report = rep.str();
  result.exit_code = diverged ? kExitDivergence : kExitOk;
  return result;
}

ExperimentResult run_compare(const ExperimentConfig& cfg,
                             const std::vector<Method>& methods) {
  ExperimentResult all;
  std::ostringstream rep;
  for (Method m : methods) {
    ExperimentConfig c = cfg;
    c.method = m;
    if (m == Method::sparse_kaczmarz && cfg.problem_kind != ProblemKind::aug_l1)
      throw std::runtime_error("sparse_kaczmarz only applies to aug_l1");
    ExperimentResult r = run_experiment(c);
    rep << "[" << method_name(m) << "]\n" << r.report << "\n";
    all.trace_paths.insert(all.trace_paths.end(), r.trace_paths.begin(),
                           r.trace_paths.end());
    for (auto& t : r.traces) all.traces.push_back(std::move(t));
    all.exit_code = std::max(all.exit_code, r.exit_code);
  }
  all.report = rep.str();
  return all;
}

}  // namespace rdciag
