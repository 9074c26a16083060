// Times the OpenMP kernels against the serial reference implementations on a
// large synthetic instance and verifies the outputs are bitwise identical.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "rdciag/checks.hpp"
#include "rdciag/kernels.hpp"
#include "rdciag/parallel.hpp"
#include "rdciag/rng.hpp"

using namespace rdciag;

namespace {

CompositeProblem big_instance(int nI, int nJ, int bdim, double fill) {
  Rng rng(5150);
  std::vector<int> idims(nI, bdim), jdims(nJ, bdim);
  LayoutPtr li = make_layout(idims), lj = make_layout(jdims);
  BlockOperator A(lj, li);
  for (int j = 0; j < nJ; ++j)
    for (int i = 0; i < nI; ++i)
      if (rng.uniform01() < fill || i == j % nI) {
        Matrix m(bdim, bdim);
        for (double& c : m.a) c = rng.normal();
        A.set_entry(j, i, std::move(m));
      }
  CompositeProblem p{{}, {}, std::move(A)};
  for (int i = 0; i < nI; ++i) {
    std::vector<double> v(bdim);
    for (double& c : v) c = rng.normal();
    p.f.push_back(SeparableComponent::quadratic_indicator(
        v, ConvexSet::whole_space(bdim)));
  }
  for (int j = 0; j < nJ; ++j) {
    std::vector<double> lo(bdim, -1.0), hi(bdim, 1.0);
    p.g.push_back(SeparableComponent::indicator(ConvexSet::box(lo, hi)));
  }
  p.validate();
  return p;
}

template <typename F>
double time_ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const BlockVector& a, const BlockVector& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace

int main() {
  parallel::init_from_env();
  std::printf("threads = %d\n", parallel::num_threads());

  CompositeProblem p = big_instance(192, 192, 16, 0.25);
  Rng rng(23);
  BlockVector x(p.layout_I()), y(p.layout_J());
  for (double& c : x.data) c = rng.normal();
  for (double& c : y.data) c = rng.normal();

  const int reps = 20;
  BlockVector out_p(p.layout_J()), out_s(p.layout_J());
  BlockVector adj_p(p.layout_I()), adj_s(p.layout_I());
  BlockVector cg_p(p.layout_I()), cg_s(p.layout_I());
  BlockVector cand_p(p.layout_J()), cand_s(p.layout_J());
  std::vector<double> terms_p, terms_s;

  BlockVector u = adjoint_apply(p.A, y);
  BlockVector s = apply(p.A, x);

  struct Row {
    const char* name;
    double serial_ms, parallel_ms, diff;
  };
  std::vector<Row> rows;

  rows.push_back({"apply",
                  time_ms([&] { kernels::serial::apply_into(p.A, x, out_s); }, reps),
                  time_ms([&] { kernels::apply_into(p.A, x, out_p); }, reps),
                  max_abs_diff(out_s, out_p)});
  rows.push_back(
      {"adjoint",
       time_ms([&] { kernels::serial::adjoint_into(p.A, y, adj_s); }, reps),
       time_ms([&] { kernels::adjoint_into(p.A, y, adj_p); }, reps),
       max_abs_diff(adj_s, adj_p)});
  rows.push_back(
      {"conjugate_grads",
       time_ms([&] { kernels::serial::conjugate_grads_into(p, u, cg_s); }, reps),
       time_ms([&] { kernels::conjugate_grads_into(p, u, cg_p); }, reps),
       max_abs_diff(cg_s, cg_p)});
  rows.push_back(
      {"candidate",
       time_ms([&] { kernels::serial::candidate_into(p, y, s, 0.1, cand_s); },
               reps),
       time_ms([&] { kernels::candidate_into(p, y, s, 0.1, cand_p); }, reps),
       max_abs_diff(cand_s, cand_p)});

  double dt_s = time_ms(
      [&] { kernels::serial::dual_terms_into(p, y, u, terms_s); }, reps);
  double dt_p =
      time_ms([&] { kernels::dual_terms_into(p, y, u, terms_p); }, reps);
  double dterm = 0.0;
  for (size_t i = 0; i < terms_s.size(); ++i)
    dterm = std::max(dterm, std::abs(terms_s[i] - terms_p[i]));
  rows.push_back({"dual_terms", dt_s, dt_p, dterm});

  std::printf("%-16s %12s %12s %10s %12s\n", "kernel", "serial ms",
              "parallel ms", "speedup", "max |diff|");
  bool all_exact = true;
  for (const auto& r : rows) {
    std::printf("%-16s %12.3f %12.3f %9.2fx %12.3e\n", r.name, r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms, r.diff);
    if (r.diff != 0.0) all_exact = false;
  }
  std::printf("bitwise identical: %s\n", all_exact ? "yes" : "NO");
  return all_exact ? 0 : 1;
}
