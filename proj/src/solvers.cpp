#include "rdciag/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rdciag/kernels.hpp"

namespace rdciag {

void GradientTable::init(const CompositeProblem& p, const BlockVector& y) {
  adjoint_y = adjoint_apply(p.A, y);
  u_snapshot = adjoint_y;
  x_snapshot = BlockVector(p.layout_I());
  kernels::conjugate_grads_into(p, u_snapshot, x_snapshot);
  aggregate = apply(p.A, x_snapshot);
  age.assign(p.nI(), 0);
}

void GradientTable::refresh(const CompositeProblem& p, int i) {
  auto ui = u_snapshot.block(i);
  auto cur = adjoint_y.block(i);
  std::copy(cur.begin(), cur.end(), ui.begin());

  std::vector<double> neg(ui.size());
  for (size_t c = 0; c < ui.size(); ++c) neg[c] = -ui[c];
  std::vector<double> xnew(ui.size());
  p.f[i].conjugate_grad(neg, xnew);

  auto xi = x_snapshot.block(i);
  std::vector<double> dx(xi.size());
  for (size_t c = 0; c < xi.size(); ++c) dx[c] = xnew[c] - xi[c];
  for (int idx : p.A.col_entries(i)) {
    const auto& e = p.A.entries()[idx];
    e.m.apply_add(dx, aggregate.block(e.j));
  }
  std::copy(xnew.begin(), xnew.end(), xi.begin());
  age[i] = 0;
}

void GradientTable::on_block_update(const CompositeProblem& p, int j,
                                    std::span<const double> delta) {
  for (int idx : p.A.row_entries(j)) {
    const auto& e = p.A.entries()[idx];
    e.m.apply_transpose_add(delta, adjoint_y.block(e.i));
  }
}

BlockVector GradientTable::recompute_aggregate(const CompositeProblem& p) const {
  return apply(p.A, x_snapshot);
}

int GradientTable::max_age() const {
  int m = 0;
  for (int a : age) m = std::max(m, a);
  return m;
}

SolverState::SolverState(const CompositeProblem& p, BlockVector y0,
                         double alpha_, std::uint64_t seed,
                         std::uint64_t schedule_seed)
    : y(std::move(y0)), k(0), rng(seed), schedule_rng(schedule_seed),
      alpha(alpha_) {
  table.init(p, y);
}

std::vector<int> schedule_refresh_set(const DelaySchedule& s, long k, int nI,
                                      const std::vector<int>& age, Rng& rng) {
  std::vector<int> out;
  switch (s.kind) {
    case DelaySchedule::Kind::zero:
      out.resize(nI);
      for (int i = 0; i < nI; ++i) out[i] = i;
      return out;
    case DelaySchedule::Kind::cyclic:
      for (int i = 0; i < nI; ++i)
        if (i % s.period == static_cast<int>(k % s.period)) out.push_back(i);
      return out;
    case DelaySchedule::Kind::random_bounded: {
      double pr = 1.0 / (s.tau_max + 1.0);
      for (int i = 0; i < nI; ++i) {
        bool coin = rng.uniform01() < pr;  // one coin per component per step
        if (coin || age[i] >= s.tau_max) out.push_back(i);
      }
      return out;
    }
  }
  return out;
}

namespace {

// Ages advance at the start of a step, then the schedule refreshes; between
// steps age[i] is the staleness at which snapshot i was last used (<= tau).
void refresh_and_check(const CompositeProblem& p, SolverState& state,
                       const DelaySchedule& schedule) {
  if (state.k > 0)
    for (int& a : state.table.age) ++a;
  std::vector<int> r = schedule_refresh_set(schedule, state.k, p.nI(),
                                            state.table.age,
                                            state.schedule_rng);
  for (int i : r) state.table.refresh(p, i);
  for (int i = 0; i < p.nI(); ++i)
    if (state.table.age[i] > schedule.tau_max)
      throw StalenessError("snapshot age exceeds the delay bound tau");
}

// prox-update one dual block from direction s_j; returns ||delta||^2
double prox_update_block(const CompositeProblem& p, SolverState& state, int j,
                         std::span<const double> sj) {
  auto yj = state.y.block(j);
  std::vector<double> w(yj.size());
  for (size_t c = 0; c < yj.size(); ++c)
    w[c] = yj[c] + state.alpha * sj[c];
  std::vector<double> ynew(yj.size());
  p.g[j].prox_conjugate(w, state.alpha, ynew);

  std::vector<double> delta(yj.size());
  double d2 = 0.0;
  for (size_t c = 0; c < yj.size(); ++c) {
    delta[c] = ynew[c] - yj[c];
    d2 += delta[c] * delta[c];
    yj[c] = ynew[c];
  }
  state.table.on_block_update(p, j, delta);
  return d2;
}

}  // namespace

void rdciag_step(const CompositeProblem& p, SolverState& state,
                 const DelaySchedule& schedule) {
  refresh_and_check(p, state, schedule);
  int j = state.rng.uniform_int(p.nJ());
  prox_update_block(p, state, j, state.table.aggregate.block(j));
  ++state.k;
}

BlockVector deterministic_candidate(const CompositeProblem& p,
                                    const SolverState& state) {
  BlockVector out(p.layout_J());
  kernels::candidate_into(p, state.y, state.table.aggregate, state.alpha, out);
  return out;
}

BlockVector dual_pg_step(const CompositeProblem& p, const BlockVector& y,
                         double alpha) {
  BlockVector u = adjoint_apply(p.A, y);
  BlockVector x(p.layout_I());
  kernels::conjugate_grads_into(p, u, x);
  BlockVector s = apply(p.A, x);
  BlockVector out(p.layout_J());
  kernels::candidate_into(p, y, s, alpha, out);
  return out;
}

void random_dbcd_step(const CompositeProblem& p, SolverState& state) {
  BlockVector u = adjoint_apply(p.A, state.y);
  kernels::conjugate_grads_into(p, u, state.table.x_snapshot);
  int j = state.rng.uniform_int(p.nJ());

  std::vector<double> sj(state.y.layout->dim(j), 0.0);
  for (int idx : p.A.row_entries(j)) {
    const auto& e = p.A.entries()[idx];
    e.m.apply_add(state.table.x_snapshot.block(e.i), sj);
  }

  auto yj = state.y.block(j);
  std::vector<double> w(yj.size());
  for (size_t c = 0; c < yj.size(); ++c) w[c] = yj[c] + state.alpha * sj[c];
  std::vector<double> ynew(yj.size());
  p.g[j].prox_conjugate(w, state.alpha, ynew);
  std::copy(ynew.begin(), ynew.end(), yj.begin());
  ++state.k;
}

void piag_step(const CompositeProblem& p, SolverState& state,
               const DelaySchedule& schedule) {
  refresh_and_check(p, state, schedule);
  BlockVector cand = deterministic_candidate(p, state);
  state.y = std::move(cand);
  state.table.adjoint_y = adjoint_apply(p.A, state.y);
  ++state.k;
}

void sparse_kaczmarz_step(const Matrix& a, const std::vector<double>& b,
                          double lambda, KaczmarzState& state) {
  const int m = a.rows;
  const int n = a.cols;
  int i = state.rng.uniform_int(m);
  const double* row = a.a.data() + static_cast<size_t>(i) * n;
  double rx = 0.0, rn = 0.0;
  for (int c = 0; c < n; ++c) {
    rx += row[c] * state.x[c];
    rn += row[c] * row[c];
  }
  double t = (rx - b[i]) / rn;
  for (int c = 0; c < n; ++c) state.x_star[c] -= t * row[c];
  state.y[i] -= t;
  for (int c = 0; c < n; ++c) {
    double u = state.x_star[c];
    state.x[c] = (u > lambda) ? u - lambda : (u < -lambda ? u + lambda : 0.0);
  }
  ++state.k;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::rdciag: return "rdciag";
    case Method::dbcd: return "dbcd";
    case Method::dual_pg: return "dual_pg";
    case Method::piag: return "piag";
    case Method::sparse_kaczmarz: return "sparse_kaczmarz";
  }
  return "?";
}

BlockVector initial_dual_point(const CompositeProblem& p) {
  BlockVector y(p.layout_J());
  for (int j = 0; j < p.nJ(); ++j) {
    auto yj = y.block(j);
    if (std::isinf(p.g[j].conjugate_value(yj)))
      p.g[j].prox_conjugate(yj, 1.0, yj);
  }
  return y;
}

ReferenceSolution compute_reference(const CompositeProblem& p, long iters) {
  double an = operator_norm(p.A);
  double mu_min = kInf;
  for (const auto& fi : p.f) mu_min = std::min(mu_min, fi.mu());
  double alpha = an > 0.0 ? mu_min / (an * an) : 1.0;

  BlockVector y = initial_dual_point(p);
  for (long k = 0; k < iters; ++k) y = dual_pg_step(p, y, alpha);

  ReferenceSolution ref;
  ref.y_star = y;
  ref.x_star = recover_primal(p, y);
  ref.d_star = dual_value(p, y);
  ref.provenance = "dual_pg x" + std::to_string(iters) +
                   " at alpha=" + std::to_string(alpha);
  return ref;
}

namespace {

struct Recorder {
  const CompositeProblem& p;
  const RunOptions& opts;
  Trace& trace;
  double d0 = 0.0;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  // returns the duality gap recorded for this row
  double record(long k, const BlockVector& y, const BlockVector& x,
                int max_age) {
    TraceRow row;
    row.k = k;
    row.D = dual_value(p, y);
    row.gap = row.D + primal_value(p, x);
    const ReferenceSolution* ref = opts.ref;
    if (ref) {
      row.dist2 = dist2(y, ref->y_star);
      row.gamma = row.D - ref->d_star + row.dist2 / (2.0 * opts.alpha);
      row.primal_err2 = dist2(x, ref->x_star);
    } else {
      row.dist2 = row.gamma = row.primal_err2 =
          std::numeric_limits<double>::quiet_NaN();
    }
    row.max_age = max_age;
    row.seconds =
        opts.timing
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count()
            : 0.0;
    trace.rows.push_back(row);
    if (row.D - d0 > 1e6 * (1.0 + std::abs(d0)))
      throw DivergenceError("dual objective exceeded its divergence guard");
    return row.gap;
  }
};

Trace run_kaczmarz(const CompositeProblem& p, const RunOptions& opts) {
  const KaczmarzData* kz = opts.kaczmarz;
  if (!kz) throw std::invalid_argument("run: sparse_kaczmarz needs its data");
  const int n = kz->A.cols;
  const int m = kz->A.rows;
  for (int r = 0; r < m; ++r) {
    double rn = 0.0;
    for (int c = 0; c < n; ++c) rn += kz->A.at(r, c) * kz->A.at(r, c);
    if (rn == 0.0) throw std::invalid_argument("sparse_kaczmarz: zero row");
  }
  long record_every = opts.stop.record_every > 0
                          ? opts.stop.record_every
                          : std::max(1L, opts.stop.max_iter / 10000);

  Trace trace;
  trace.meta = {method_name(opts.method), opts.alpha, 0, opts.seed, n, m};
  KaczmarzState st(n, m, opts.seed);
  auto start = std::chrono::steady_clock::now();

  auto record = [&](long k) {
    TraceRow row;
    row.k = k;
    double obj = 0.0;
    for (double v : st.x) obj += kz->lambda * std::abs(v) + 0.5 * v * v;
    row.D = obj;
    double res2 = 0.0;
    for (int r = 0; r < m; ++r) {
      double s = -kz->b[r];
      for (int c = 0; c < n; ++c) s += kz->A.at(r, c) * st.x[c];
      res2 += s * s;
    }
    row.gap = std::sqrt(res2);  // constraint residual, the stopping certificate
    row.dist2 = row.gamma = std::numeric_limits<double>::quiet_NaN();
    if (opts.ref) {
      double e2 = 0.0;
      for (int c = 0; c < n; ++c) {
        double d = st.x[c] - opts.ref->x_star.data[c];
        e2 += d * d;
      }
      row.primal_err2 = e2;
    } else {
      row.primal_err2 = std::numeric_limits<double>::quiet_NaN();
    }
    row.max_age = 0;
    row.seconds =
        opts.timing
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count()
            : 0.0;
    trace.rows.push_back(row);
    return row.gap;
  };

  double gap = record(0);
  for (long k = 0; k < opts.stop.max_iter && gap > opts.stop.gap_tol; ++k) {
    sparse_kaczmarz_step(kz->A, kz->b, kz->lambda, st);
    if (opts.step_hook) opts.step_hook(k, 0.0);
    if (st.k % record_every == 0 || st.k == opts.stop.max_iter)
      gap = record(st.k);
  }
  if (trace.rows.back().k != st.k) record(st.k);
  return trace;
}

}  // namespace

Trace run(const CompositeProblem& p, const RunOptions& opts) {
  if (opts.method == Method::sparse_kaczmarz) return run_kaczmarz(p, opts);

  long record_every = opts.stop.record_every > 0
                          ? opts.stop.record_every
                          : std::max(1L, opts.stop.max_iter / 10000);

  BlockVector y0 = initial_dual_point(p);
  SolverState st(p, y0, opts.alpha, opts.seed, opts.schedule.seed);

  Trace trace;
  trace.meta = {method_name(opts.method), opts.alpha, opts.schedule.tau_max,
                opts.seed, p.nI(), p.nJ()};
  Recorder rec{p, opts, trace};
  rec.d0 = dual_value(p, y0);

  auto current_primal = [&]() -> BlockVector {
    if (opts.method == Method::dual_pg) return recover_primal(p, st.y);
    return st.table.x_snapshot;
  };

  double gap = rec.record(0, st.y, current_primal(), st.table.max_age());
  while (st.k < opts.stop.max_iter && gap > opts.stop.gap_tol) {
    BlockVector prev;
    if (opts.step_hook) prev = st.y;
    switch (opts.method) {
      case Method::rdciag:
        rdciag_step(p, st, opts.schedule);
        break;
      case Method::dbcd:
        random_dbcd_step(p, st);
        break;
      case Method::dual_pg:
        st.y = dual_pg_step(p, st.y, st.alpha);
        ++st.k;
        break;
      case Method::piag:
        piag_step(p, st, opts.schedule);
        break;
      case Method::sparse_kaczmarz:
        break;  // handled above
    }
    if (opts.step_hook) opts.step_hook(st.k - 1, dist2(st.y, prev));
    if (st.k % record_every == 0 || st.k == opts.stop.max_iter)
      gap = rec.record(st.k, st.y, current_primal(), st.table.max_age());
  }
  if (trace.rows.back().k != st.k)
    rec.record(st.k, st.y, current_primal(), st.table.max_age());
  return trace;
}

}  // namespace rdciag
