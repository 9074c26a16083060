#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdciag/matrix.hpp"
#include "rdciag/problem.hpp"
#include "rdciag/rng.hpp"

namespace rdciag {

// How component snapshots age. All produced delays satisfy tau_k^i <= tau.
struct DelaySchedule {
  enum class Kind { zero, cyclic, random_bounded };
  Kind kind = Kind::zero;
  int tau_max = 0;        // the bound tau
  int period = 1;         // cyclic: refresh i when k = i (mod period)
  std::uint64_t seed = 0; // random_bounded coin stream

  static DelaySchedule zero() { return {}; }
  static DelaySchedule cyclic(int period) {
    DelaySchedule s;
    s.kind = Kind::cyclic;
    s.period = period;
    s.tau_max = period - 1;
    return s;
  }
  static DelaySchedule random_bounded(int tau, std::uint64_t seed) {
    DelaySchedule s;
    s.kind = Kind::random_bounded;
    s.tau_max = tau;
    s.seed = seed;
    return s;
  }
};

// Per-component stale primal snapshots plus the aggregated dual ascent
// direction s_j = sum_i A_ji x_i, maintained incrementally. adjoint_y tracks
// A* y for the current iterate so a refresh is a copy plus one conjugate
// gradient; a dual block update patches only the columns its row touches.
struct GradientTable {
  BlockVector adjoint_y;   // over I: (A* y)_i for the current y
  BlockVector u_snapshot;  // over I: (A* y)_i frozen at the last refresh of i
  BlockVector x_snapshot;  // over I: grad f_i*(-u_snapshot[i])
  BlockVector aggregate;   // over J: s_j = sum_i A_ji x_snapshot[i]
  std::vector<int> age;    // iterations since refresh of i

  void init(const CompositeProblem& p, const BlockVector& y);
  void refresh(const CompositeProblem& p, int i);
  // Call after y_j changed by delta (the new minus the old block).
  void on_block_update(const CompositeProblem& p, int j,
                       std::span<const double> delta);
  // Rebuilds aggregate from x_snapshot; reconciliation for checks.
  BlockVector recompute_aggregate(const CompositeProblem& p) const;
  int max_age() const;
};

struct SolverState {
  BlockVector y;
  GradientTable table;
  long k = 0;
  Rng rng;
  Rng schedule_rng;
  double alpha = 0.0;

  SolverState(const CompositeProblem& p, BlockVector y0, double alpha,
              std::uint64_t seed, std::uint64_t schedule_seed);
};

// Components to refresh at iteration k given current ages; ascending order.
std::vector<int> schedule_refresh_set(const DelaySchedule& s, long k, int nI,
                                      const std::vector<int>& age, Rng& rng);

// One iteration of the random dual coordinate incremental aggregated
// gradient method: refresh per schedule, draw j uniformly, prox-update that
// block from the aggregated stale direction.
void rdciag_step(const CompositeProblem& p, SolverState& state,
                 const DelaySchedule& schedule);

// The full-block candidate y~ from the current table; does not mutate state.
BlockVector deterministic_candidate(const CompositeProblem& p,
                                    const SolverState& state);

// Full proximal gradient step on the dual with fresh gradients.
BlockVector dual_pg_step(const CompositeProblem& p, const BlockVector& y,
                         double alpha);

// One random block with fresh gradients.
void random_dbcd_step(const CompositeProblem& p, SolverState& state);

// All blocks from the aggregated stale direction (deterministic baseline).
void piag_step(const CompositeProblem& p, SolverState& state,
               const DelaySchedule& schedule);

// Randomized sparse Kaczmarz for min lambda||x||_1 + (1/2)||x||^2, Ax = b.
struct KaczmarzState {
  std::vector<double> x_star;  // dual-certificate iterate x^k_*
  std::vector<double> x;       // primal iterate grad f*(x_*)
  std::vector<double> y;       // row multipliers with x_* = A^T y
  long k = 0;
  Rng rng;
  KaczmarzState(int n, int m, std::uint64_t seed)
      : x_star(n, 0.0), x(n, 0.0), y(m, 0.0), k(0), rng(seed) {}
};

void sparse_kaczmarz_step(const Matrix& a, const std::vector<double>& b,
                          double lambda, KaczmarzState& state);

enum class Method { rdciag, dbcd, dual_pg, piag, sparse_kaczmarz };

std::string method_name(Method m);

struct StopRule {
  long max_iter = 100000;
  double gap_tol = 1e-8;
  long record_every = 0;  // 0 -> max(1, max_iter / 10000)
};

struct TraceRow {
  long k = 0;
  double D = 0.0;
  double gap = 0.0;
  double dist2 = 0.0;        // ||y - y*||^2; NaN without a reference
  double gamma = 0.0;        // D - D* + dist2 / (2 alpha); NaN without a reference
  double primal_err2 = 0.0;  // ||x - x*||^2; NaN without a reference
  int max_age = 0;
  double seconds = 0.0;
};

struct TraceMeta {
  std::string method;
  double alpha = 0.0;
  int tau = 0;
  std::uint64_t seed = 0;
  int nI = 0;
  int nJ = 0;
};

struct Trace {
  TraceMeta meta;
  std::vector<TraceRow> rows;
};

// Data needed to drive the sparse Kaczmarz baseline (same primal problem).
struct KaczmarzData {
  Matrix A;
  std::vector<double> b;
  double lambda = 0.0;
};

struct RunOptions {
  Method method = Method::rdciag;
  DelaySchedule schedule;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  StopRule stop;
  const ReferenceSolution* ref = nullptr;
  const KaczmarzData* kaczmarz = nullptr;  // required for sparse_kaczmarz
  bool timing = false;                      // off keeps traces byte-identical
  // Called at every iteration with (k, ||y^{k+1} - y^k||^2); used by the
  // theory checkers that need per-step sequences.
  std::function<void(long, double)> step_hook;
};

// Iterates until gap <= gap_tol or max_iter, recording every record_every
// iterations. Throws DivergenceError when D(y) blows up.
Trace run(const CompositeProblem& p, const RunOptions& opts);

// y0 = 0 unless 0 is outside dom g_j*; such blocks fall back to
// prox_conjugate(g_j, 0, 1).
BlockVector initial_dual_point(const CompositeProblem& p);

// Long dual proximal gradient run at the safe step mu_min / ||A||^2,
// packaged as a reference solution.
ReferenceSolution compute_reference(const CompositeProblem& p, long iters);

}  // namespace rdciag
