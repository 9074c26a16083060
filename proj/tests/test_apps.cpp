#include <cmath>

#include "doctest.h"
#include "rdciag/apps.hpp"
#include "rdciag/desk.hpp"
#include "rdciag/diagnostics.hpp"

using namespace rdciag;

namespace {

// oracle: 1-D constrained maximizer of u(x) - (lambda/2)x^2 on [0, ub]
// by golden section
double num_oracle(double lambda, double ub,
                  const std::function<double(double)>& u) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double x) { return 0.5 * lambda * x * x - u(x); };
  double a = 0.0, b = ub;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 300; ++it) {
    if (f(c) < f(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_SUITE("apps") {

TEST_CASE("best approximation without extra constraints") {
  BestApproxSpec spec;
  spec.v = {2.5, -1.0};
  spec.omega0 = ConvexSet::box({0.0, 0.0}, {1.0, 1.0});
  CompositeProblem p = build_best_approximation(spec);
  CHECK(p.nJ() == 0);
  // optimal x is the projection of v; with no dual blocks the recovered
  // primal at y = (empty) is already it
  BlockVector y(p.layout_J());
  BlockVector x = recover_primal(p, y);
  CHECK(x.data[0] == doctest::Approx(1.0));
  CHECK(x.data[1] == doctest::Approx(0.0));
  CHECK(duality_gap(p, x, y) <= 1e-12);
}

TEST_CASE("best approximation single halfspace has a closed form") {
  BestApproxSpec spec;
  spec.v = {2.0, 2.0};
  spec.omega0 = ConvexSet::whole_space(2);
  spec.constraints = {ConvexSet::halfspace({1.0, 1.0}, 2.0)};
  CompositeProblem p = build_best_approximation(spec);
  ReferenceSolution ref = compute_reference(p, 100000);
  // oracle: projection of (2,2) onto x1+x2 <= 2 is (1,1)
  CHECK(ref.x_star.data[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(ref.x_star.data[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("desk best approximation: recovered iterates stay in omega0") {
  BestApproxSpec spec = desk_best_approx();
  CompositeProblem p = build_best_approximation(spec);
  RunOptions opts;
  opts.method = Method::rdciag;
  opts.schedule = DelaySchedule::random_bounded(1, 3);
  opts.alpha = 0.05;
  opts.seed = 8;
  opts.stop = {2000, 0.0, 50};
  Trace t = run(p, opts);
  // feasibility of the table primal for omega0 is structural
  SolverState st(p, initial_dual_point(p), opts.alpha, 8, 3);
  for (int k = 0; k < 500; ++k) {
    rdciag_step(p, st, opts.schedule);
    CHECK(set_distance(spec.omega0, st.table.x_snapshot.block(0)) <= 1e-12);
  }
  CHECK(t.rows.size() >= 2);
}

TEST_CASE("augmented l1 with zero rhs solves to zero") {
  AugL1Spec spec;
  spec.A = Matrix(2, 3);
  Rng rng(141);
  for (double& v : spec.A.a) v = rng.normal();
  spec.b = {0.0, 0.0};
  spec.lambda = 0.3;
  CompositeProblem p = build_augmented_l1(spec);
  ReferenceSolution ref = compute_reference(p, 20000);
  CHECK(norm(ref.x_star) <= 1e-9);
  CHECK(std::abs(ref.d_star) <= 1e-9);
}

TEST_CASE("augmented l1 1x1 forced solution") {
  AugL1Spec spec;
  spec.A = Matrix(1, 1);
  spec.A.at(0, 0) = 1.0;
  spec.b = {4.0};
  spec.lambda = 1.0;
  CompositeProblem p = build_augmented_l1(spec);
  ReferenceSolution ref = compute_reference(p, 200000);
  CHECK(ref.x_star.data[0] == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("augmented l1 structure") {
  AugL1Spec spec = desk_aug_l1();
  CompositeProblem p = build_augmented_l1(spec);
  CHECK(p.nI() == 30);
  CHECK(p.nJ() == 10);
  // every stored selector has unit norm
  for (const auto& e : p.A.entries())
    CHECK(e.norm == doctest::Approx(1.0).epsilon(1e-12));

  // dual value equals the hand-expanded sum f_i*(-sum_j y_ji) + sum_j t_j b_j
  Rng rng(143);
  BlockVector y(p.layout_J());
  for (int j = 0; j < 10; ++j) {
    double t = rng.normal();
    for (int c = 0; c < 30; ++c) y.block(j)[c] = t * spec.A.at(j, c);
  }
  double want = 0.0;
  for (int i = 0; i < 30; ++i) {
    double s = 0.0;
    for (int j = 0; j < 10; ++j) s += y.block(j)[i];
    double m = std::max(std::abs(-s) - spec.lambda, 0.0);
    want += 0.5 * m * m;
  }
  for (int j = 0; j < 10; ++j) {
    double an2 = 0.0, ty = 0.0;
    for (int c = 0; c < 30; ++c) {
      an2 += spec.A.at(j, c) * spec.A.at(j, c);
      ty += spec.A.at(j, c) * y.block(j)[c];
    }
    want += ty / an2 * spec.b[j];
  }
  CHECK(dual_value(p, y) == doctest::Approx(want).epsilon(1e-10));

  // zero row rejected
  AugL1Spec badspec = spec;
  for (int c = 0; c < 30; ++c) badspec.A.at(4, c) = 0.0;
  CHECK_THROWS(build_augmented_l1(badspec));
}

TEST_CASE("num single source against the KKT oracle") {
  NumSpec spec;
  spec.sources = {{UtilityKind::concave_quadratic, 1.0, 0.0, 10.0}};
  spec.capacities = {3.0};
  spec.link_sources = {{0}};
  spec.lambda = 1.0;
  CompositeProblem p = build_num(spec);
  ReferenceSolution ref = compute_reference(p, 100000);
  // capacity slack: the unconstrained maximizer of x - x^2/2 - ... is 0.5
  double want = num_oracle(1.0, std::min(10.0, 3.0),
                           [](double x) { return x; });
  CHECK(want == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ref.x_star.data[0] == doctest::Approx(want).epsilon(1e-6));

  // binding capacity
  NumSpec tight = spec;
  tight.capacities = {0.2};
  CompositeProblem p2 = build_num(tight);
  ReferenceSolution ref2 = compute_reference(p2, 200000);
  double want2 = num_oracle(1.0, std::min(10.0, 0.2),
                            [](double x) { return x; });
  CHECK(want2 == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(ref2.x_star.data[0] == doctest::Approx(want2).epsilon(1e-5));
}

TEST_CASE("num full-block zero-delay step matches the closed-form update") {
  NumSpec spec = desk_num();
  CompositeProblem p = build_num(spec);
  const int S = 4, L = 3;
  double alpha = 0.07;
  // a generic dual point
  BlockVector y(p.layout_J());
  y.data = {0.4, 0.1, 0.9};

  SolverState st(p, y, alpha, 1, 0);
  piag_step(p, st, DelaySchedule::zero());

  // transcription of the closed-form update:
  //   x_s = argmin on [0, M] of (lambda/2) x^2 - u_s(x) + (sum_l y_l) x
  //   y_l' = [y_l + alpha sum_s x_s - alpha c_l]_+
  std::vector<double> x(S);
  for (int s = 0; s < S; ++s) {
    double price = 0.0;
    for (int l = 0; l < L; ++l)
      for (int m : spec.link_sources[l])
        if (m == s) price += y.data[l];
    // 1-D solve by bisection on the stationarity condition
    double lo = 0.0, hi = spec.sources[s].cap;
    auto d = [&](double t) {
      return spec.lambda * t - 1.0 / (1.0 + t) + price;
    };
    if (d(lo) >= 0) {
      x[s] = 0.0;
    } else if (d(hi) <= 0) {
      x[s] = hi;
    } else {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (d(mid) > 0 ? hi : lo) = mid;
      }
      x[s] = 0.5 * (lo + hi);
    }
  }
  for (int l = 0; l < L; ++l) {
    double load = 0.0;
    for (int m : spec.link_sources[l]) load += x[m];
    double want = std::max(0.0, y.data[l] + alpha * load -
                                    alpha * spec.capacities[l]);
    CHECK(std::abs(st.y.data[l] - want) <= 1e-12);
  }
}

TEST_CASE("num routing consistency and validation") {
  NumSpec spec = desk_num();
  CompositeProblem p = build_num(spec);
  // A_ls nonzero exactly when s uses link l
  for (int l = 0; l < 3; ++l)
    for (int s = 0; s < 4; ++s) {
      bool member = false;
      for (int m : spec.link_sources[l]) member |= (m == s);
      CHECK((p.A.entry(l, s) != nullptr) == member);
    }

  NumSpec bad = spec;
  bad.lambda = 0.0;
  CHECK_THROWS(build_num(bad));
  NumSpec orphan = spec;
  orphan.link_sources = {{0, 1}, {1}, {0}};  // sources 2 and 3 use no link
  CHECK_THROWS(build_num(orphan));
}

TEST_CASE("built problems satisfy weak duality") {
  Rng rng(149);
  CompositeProblem ps[] = {build_best_approximation(desk_best_approx()),
                           build_augmented_l1(desk_aug_l1()),
                           build_num(desk_num())};
  for (auto& p : ps) {
    for (int t = 0; t < 200; ++t) {
      BlockVector x(p.layout_I()), y(p.layout_J());
      for (double& v : x.data) v = rng.normal();
      for (double& v : y.data) v = 0.5 * rng.normal();
      double f = primal_value(p, x), d = dual_value(p, y);
      if (std::isinf(f) || std::isinf(d)) continue;
      CHECK(f + d >= -1e-12);
    }
  }
}

}  // TEST_SUITE
