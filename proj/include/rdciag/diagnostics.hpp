#pragma once

#include <span>
#include <vector>

#include "rdciag/solvers.hpp"

namespace rdciag {

// Gamma_alpha(y) = D(y) - D* + dist2 / (2 alpha), with dist2 the squared
// distance surrogate ||y - y*||^2.
double lyapunov_value(double d_y, double d_star, double dist2, double alpha);

struct RateReport {
  double empirical_rate = 1.0;  // exp(slope of log(field) vs k)
  double r_squared = 0.0;
  double theoretical_rate = 1.0;
  long burn_in = 0;    // iterations dropped
  long used_rows = 0;  // rows entering the fit
};

// Least-squares fit of log(value) against k on (k, value) pairs; values
// <= 1e-14 are truncated. Throws InsufficientDataError below 10 usable rows.
RateReport fit_linear_rate(std::span<const long> ks,
                           std::span<const double> values,
                           double burn_in_fraction, double theoretical_rate);

enum class TraceField { D_minus_dstar, gap, dist2, gamma, primal_err2 };

RateReport fit_linear_rate(const Trace& trace, TraceField field,
                           double burn_in_fraction, double theoretical_rate,
                           double d_star = 0.0);

struct TailReport {
  bool hypothesis_ok = false;
  bool condition_ok = false;
  bool conclusion_ok = false;
  long first_hypothesis_violation = -1;
  long first_conclusion_violation = -1;
  double hypothesis_pass_fraction = 0.0;
  double condition_lhs = 0.0;  // (c/(1-a)) (1-a^{k0+1})/a^{k0}, to compare with b
};

// Checks the three clauses of the tail-vanishing recurrence on sequences
// V, w: the hypothesis V_{k+1} <= a V_k - b w_k + c sum_{s=k-k0}^k w_s (with
// w_s = 0 for s < 0), the constant condition, and the conclusion
// V_k <= a^k V_0. Slack 1e-10 on comparisons.
TailReport check_tail_recurrence(std::span<const double> V,
                                 std::span<const double> w, double a, double b,
                                 double c, int k0);

struct DescentReport {
  long checked = 0;
  long violations = 0;
  double max_violation = 0.0;  // most positive lhs - rhs seen
};

// Evaluates the deterministic descent inequality
//   D(y~) <= D(y) + (1/2a)||y-y^k||^2 - (1/2a)||y-y~||^2 - (1/2a)||y~-y^k||^2
//           + eta2 (||y~-y^k||^2 + sum_{s=k-tau}^{k-1} ||y^{s+1}-y^s||^2)
// at y in {y^k, y_star} for one step. history holds y^{k-tau..k} in order
// (fewer entries near the start), candidate is y~^{k+1}.
DescentReport check_descent_step(const CompositeProblem& p,
                                 std::span<const BlockVector> history,
                                 const BlockVector& candidate,
                                 const BlockVector* y_star, double alpha,
                                 double eta2, double slack = 1e-8);

// Drives an RDCIAG run for `steps` iterations checking every step.
DescentReport run_descent_check(const CompositeProblem& p,
                                const DelaySchedule& schedule, double alpha,
                                std::uint64_t seed, long steps,
                                const ReferenceSolution* ref);

// sigma_hat = min over probes of 2 (D(y) - D*) / ||y - y*||^2, skipping
// probes with dist2 <= 1e-12. Throws InsufficientDataError below 100 usable
// probes.
double estimate_sigma(const CompositeProblem& p, const ReferenceSolution& ref,
                      const std::vector<BlockVector>& probe_points);

// Domain-respecting probes: blockwise prox_conjugate applied to Gaussian
// perturbations of y_star at log-spaced radii. Deterministic in seed.
std::vector<BlockVector> make_probe_points(const CompositeProblem& p,
                                           const ReferenceSolution& ref,
                                           int count, std::uint64_t seed);

// 2 alpha Gamma0 (sum_i sum_j ||A_ji||^2 / mu_i^2) rate^{k - tau}.
// Throws when k < tau.
double primal_error_bound(double alpha, double gamma0,
                          const ProblemConstants& constants,
                          const CompositeProblem& p, long k, int tau);

}  // namespace rdciag
