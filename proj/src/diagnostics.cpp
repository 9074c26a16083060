#include "rdciag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace rdciag {

double lyapunov_value(double d_y, double d_star, double dist2, double alpha) {
  return d_y - d_star + dist2 / (2.0 * alpha);
}

RateReport fit_linear_rate(std::span<const long> ks,
                           std::span<const double> values,
                           double burn_in_fraction, double theoretical_rate) {
  const size_t n = ks.size();
  size_t skip = static_cast<size_t>(burn_in_fraction * static_cast<double>(n));
  if (skip >= n) skip = n;

  std::vector<double> xs, ys;
  for (size_t r = skip; r < n; ++r) {
    if (values[r] > 1e-14) {  // floating-point floor
      xs.push_back(static_cast<double>(ks[r]));
      ys.push_back(std::log(values[r]));
    }
  }
  if (xs.size() < 10)
    throw InsufficientDataError("fit_linear_rate: fewer than 10 usable rows");

  double mx = 0.0, my = 0.0;
  for (size_t r = 0; r < xs.size(); ++r) {
    mx += xs[r];
    my += ys[r];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t r = 0; r < xs.size(); ++r) {
    double dx = xs[r] - mx, dy = ys[r] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateReport rep;
  rep.burn_in = skip > 0 ? ks[skip - 1] + 1 : 0;
  rep.used_rows = static_cast<long>(xs.size());
  rep.theoretical_rate = theoretical_rate;
  double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  rep.empirical_rate = std::exp(slope);
  rep.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return rep;
}

RateReport fit_linear_rate(const Trace& trace, TraceField field,
                           double burn_in_fraction, double theoretical_rate,
                           double d_star) {
  std::vector<long> ks;
  std::vector<double> vals;
  ks.reserve(trace.rows.size());
  vals.reserve(trace.rows.size());
  for (const auto& r : trace.rows) {
    ks.push_back(r.k);
    switch (field) {
      case TraceField::D_minus_dstar: vals.push_back(r.D - d_star); break;
      case TraceField::gap: vals.push_back(r.gap); break;
      case TraceField::dist2: vals.push_back(r.dist2); break;
      case TraceField::gamma: vals.push_back(r.gamma); break;
      case TraceField::primal_err2: vals.push_back(r.primal_err2); break;
    }
  }
  return fit_linear_rate(ks, vals, burn_in_fraction, theoretical_rate);
}

TailReport check_tail_recurrence(std::span<const double> V,
                                 std::span<const double> w, double a, double b,
                                 double c, int k0) {
  const double slack = 1e-10;
  TailReport rep;

  long usable = static_cast<long>(std::min(V.size() - 1, w.size()));
  long hyp_ok = 0, hyp_total = 0;
  rep.hypothesis_ok = true;
  for (long k = 0; k < usable; ++k) {
    double tail = 0.0;
    for (long s = std::max(0L, k - k0); s <= k; ++s) tail += w[s];
    double rhs = a * V[k] - b * w[k] + c * tail;
    ++hyp_total;
    if (V[k + 1] <= rhs + slack) {
      ++hyp_ok;
    } else {
      rep.hypothesis_ok = false;
      if (rep.first_hypothesis_violation < 0) rep.first_hypothesis_violation = k;
    }
  }
  rep.hypothesis_pass_fraction =
      hyp_total > 0 ? static_cast<double>(hyp_ok) / hyp_total : 1.0;

  rep.condition_lhs =
      (c / (1.0 - a)) * (1.0 - std::pow(a, k0 + 1)) / std::pow(a, k0);
  rep.condition_ok = rep.condition_lhs <= b + slack;

  rep.conclusion_ok = true;
  double ak = 1.0;
  for (size_t k = 0; k < V.size(); ++k) {
    if (V[k] > ak * V[0] + slack) {
      rep.conclusion_ok = false;
      if (rep.first_conclusion_violation < 0)
        rep.first_conclusion_violation = static_cast<long>(k);
      break;
    }
    ak *= a;
  }
  return rep;
}

DescentReport check_descent_step(const CompositeProblem& p,
                                 std::span<const BlockVector> history,
                                 const BlockVector& candidate,
                                 const BlockVector* y_star, double alpha,
                                 double eta2, double slack) {
  DescentReport rep;
  const BlockVector& yk = history.back();

  double moves = 0.0;  // sum_{s=k-tau}^{k-1} ||y^{s+1} - y^s||^2
  for (size_t s = 0; s + 1 < history.size(); ++s)
    moves += dist2(history[s + 1], history[s]);

  double d_cand = dual_value(p, candidate);
  double step2 = dist2(candidate, yk);
  double common = eta2 * (step2 + moves) - step2 / (2.0 * alpha);

  auto eval_at = [&](const BlockVector& y) {
    double lhs = d_cand;
    double rhs = dual_value(p, y) + dist2(y, yk) / (2.0 * alpha) -
                 dist2(y, candidate) / (2.0 * alpha) + common;
    ++rep.checked;
    double v = lhs - rhs;
    if (std::isnan(v)) v = kInf;  // inf - inf: treat as a violation
    rep.max_violation = std::max(rep.max_violation, v);
    if (v > slack) ++rep.violations;
  };

  eval_at(yk);
  if (y_star) eval_at(*y_star);
  return rep;
}

DescentReport run_descent_check(const CompositeProblem& p,
                                const DelaySchedule& schedule, double alpha,
                                std::uint64_t seed, long steps,
                                const ReferenceSolution* ref) {
  ProblemConstants consts = compute_constants(p, schedule.tau_max, 0.0, alpha);

  BlockVector y0 = initial_dual_point(p);
  SolverState st(p, y0, alpha, seed, schedule.seed);
  std::deque<BlockVector> hist{st.y};
  std::vector<BlockVector> window;

  DescentReport total;
  for (long k = 0; k < steps; ++k) {
    // advance exactly as the solver would; the aggregate then holds the
    // refreshed snapshots that produced this step
    rdciag_step(p, st, schedule);
    // rebuild the full-block candidate from the pre-update iterate
    SolverState probe(st);
    probe.y = hist.back();
    BlockVector cand = deterministic_candidate(p, probe);

    window.assign(hist.begin(), hist.end());
    DescentReport r =
        check_descent_step(p, window, cand, ref ? &ref->y_star : nullptr,
                           alpha, consts.eta2);
    total.checked += r.checked;
    total.violations += r.violations;
    total.max_violation = std::max(total.max_violation, r.max_violation);

    hist.push_back(st.y);
    while (static_cast<long>(hist.size()) > schedule.tau_max + 1)
      hist.pop_front();
  }
  return total;
}

double estimate_sigma(const CompositeProblem& p, const ReferenceSolution& ref,
                      const std::vector<BlockVector>& probe_points) {
  double best = kInf;
  long usable = 0;
  for (const auto& y : probe_points) {
    double d2 = dist2(y, ref.y_star);
    if (d2 <= 1e-12) continue;  // probes at y_star carry no information
    double dy = dual_value(p, y);
    if (std::isinf(dy)) continue;
    ++usable;
    best = std::min(best, 2.0 * (dy - ref.d_star) / d2);
  }
  if (usable < 100)
    throw InsufficientDataError("estimate_sigma: fewer than 100 usable probes");
  return best;
}

std::vector<BlockVector> make_probe_points(const CompositeProblem& p,
                                           const ReferenceSolution& ref,
                                           int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlockVector> out;
  out.reserve(count);
  for (int n = 0; n < count; ++n) {
    // radii log-spaced over [1e-4, 1]
    double r = std::pow(10.0, -4.0 + 4.0 * (n % 16) / 15.0);
    BlockVector y = ref.y_star;
    for (double& v : y.data) v += r * rng.normal();
    BlockVector proj(p.layout_J());
    for (int j = 0; j < p.nJ(); ++j)
      p.g[j].prox_conjugate(y.block(j), 1.0, proj.block(j));
    out.push_back(std::move(proj));
  }
  return out;
}

double primal_error_bound(double alpha, double gamma0,
                          const ProblemConstants& constants,
                          const CompositeProblem& p, long k, int tau) {
  if (k < tau)
    throw std::invalid_argument("primal_error_bound: needs k >= tau");
  double s = 0.0;
  for (int i = 0; i < p.nI(); ++i) {
    double mu = p.f[i].mu();
    for (int idx : p.A.col_entries(i)) {
      double n = p.A.entries()[idx].norm;
      s += n * n / (mu * mu);
    }
  }
  return 2.0 * alpha * gamma0 * s *
         std::pow(constants.rate, static_cast<double>(k - tau));
}

}  // namespace rdciag
