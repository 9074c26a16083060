#include <cmath>

#include "doctest.h"
#include "rdciag/desk.hpp"
#include "rdciag/diagnostics.hpp"

using namespace rdciag;

TEST_SUITE("diagnostics") {

TEST_CASE("lyapunov value") {
  CHECK(lyapunov_value(3.0, 3.0, 0.0, 0.5) == 0.0);
  CHECK(lyapunov_value(4.0, 3.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(lyapunov_value(4.0, 3.0, 0.7, 0.1) >= 4.0 - 3.0);
}

TEST_CASE("rate fit recovers exact geometric decay") {
  std::vector<long> ks;
  std::vector<double> vs;
  for (int k = 0; k < 200; ++k) {
    ks.push_back(k);
    vs.push_back(std::pow(0.9, k));
  }
  RateReport rep = fit_linear_rate(ks, vs, 0.0, 1.0);
  CHECK(rep.empirical_rate == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(rep.r_squared >= 1.0 - 1e-12);

  std::vector<double> flat(200, 0.37);
  RateReport c = fit_linear_rate(ks, flat, 0.0, 1.0);
  CHECK(c.empirical_rate == doctest::Approx(1.0));

  std::vector<long> few{0, 1, 2};
  std::vector<double> fv{1.0, 0.9, 0.8};
  CHECK_THROWS_AS(fit_linear_rate(few, fv, 0.0, 1.0), InsufficientDataError);
}

TEST_CASE("tail recurrence trivial cases") {
  // V_k = a^k with w = 0 satisfies everything
  std::vector<double> V, w(50, 0.0);
  for (int k = 0; k < 50; ++k) V.push_back(std::pow(0.8, k));
  TailReport rep = check_tail_recurrence(V, w, 0.8, 1.0, 0.3, 2);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.condition_ok);
  CHECK(rep.conclusion_ok);
  CHECK(rep.hypothesis_pass_fraction == 1.0);

  // condition value example: a=0.5, b=1, c=0.3, k0=1 -> 0.9 <= 1
  TailReport c2 = check_tail_recurrence(V, w, 0.5, 1.0, 0.3, 1);
  CHECK(c2.condition_lhs == doctest::Approx(0.9));
  CHECK(c2.condition_ok);

  // an increasing sequence fails the conclusion
  std::vector<double> bad{1.0, 2.0, 4.0};
  std::vector<double> wz(3, 0.0);
  TailReport c3 = check_tail_recurrence(bad, wz, 0.9, 1.0, 0.0, 0);
  CHECK(!c3.conclusion_ok);
  CHECK(c3.first_conclusion_violation == 1);
}

TEST_CASE("tail recurrence internal consistency on synthetic instances") {
  Rng rng(733);
  for (int n = 0; n < 1000; ++n) {
    double a = 0.3 + 0.65 * rng.uniform01();
    int k0 = rng.uniform_int(5);
    double c = 0.01 + 0.5 * rng.uniform01();
    double cond = (c / (1.0 - a)) * (1.0 - std::pow(a, k0 + 1)) /
                  std::pow(a, k0);
    double b = cond * (1.0 + rng.uniform01());
    const int len = 40;
    std::vector<double> V(len), w(len, 0.0);
    V[0] = 0.5 + rng.uniform01();
    for (int k = 0; k + 1 < len; ++k) {
      w[k] = rng.uniform01() * V[k] * (1.0 - a) / (4.0 * b + 1.0);
      double tail = 0.0;
      for (int s = std::max(0, k - k0); s <= k; ++s) tail += w[s];
      V[k + 1] = a * V[k] - b * w[k] + c * tail;
    }
    TailReport rep = check_tail_recurrence(V, w, a, b, c, k0);
    // hypothesis and condition hold by construction; the lemma then
    // promises the conclusion
    REQUIRE(rep.hypothesis_ok);
    REQUIRE(rep.condition_ok);
    CHECK(rep.conclusion_ok);
  }
}

TEST_CASE("descent inequality on a tiny quadratic instance") {
  // tau = 0, |J| = 1: the inequality must hold with tiny slack at each step
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  A.set_entry(0, 0, Matrix::identity(1));
  CompositeProblem p{{SeparableComponent::quadratic_indicator(
                         {2.0}, ConvexSet::whole_space(1))},
                     {SeparableComponent::indicator(
                         ConvexSet::halfspace({1.0}, 1.0))},
                     std::move(A)};
  p.validate();
  ReferenceSolution ref = compute_reference(p, 20000);
  ProblemConstants c = compute_constants(p, 0, 0.0);
  DescentReport rep = run_descent_check(p, DelaySchedule::zero(),
                                        1.0 / (4.0 * (c.eta1 + c.eta2)), 11,
                                        500, &ref);
  CHECK(rep.checked == 1000);  // two test points per step
  CHECK(rep.violations == 0);
  CHECK(rep.max_violation <= 1e-10);
}

TEST_CASE("descent check flags a fabricated violation") {
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  A.set_entry(0, 0, Matrix::identity(1));
  CompositeProblem p{{SeparableComponent::quadratic_indicator(
                         {2.0}, ConvexSet::whole_space(1))},
                     {SeparableComponent::indicator(
                         ConvexSet::halfspace({1.0}, 1.0))},
                     std::move(A)};
  p.validate();
  // a "candidate" far uphill cannot satisfy the inequality
  BlockVector yk(p.layout_J());
  BlockVector cand(p.layout_J());
  cand.data[0] = 50.0;
  std::vector<BlockVector> hist{yk};
  DescentReport rep = check_descent_step(p, hist, cand, nullptr, 0.01, 1.0);
  CHECK(rep.violations == 1);
}

TEST_CASE("sigma estimate on an exact quadratic") {
  // f = (1/2)x^2, A = sqrt(2) I, g = indicator{0}: D(y) = ||y||^2 exactly
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  Matrix m(1, 1);
  m.at(0, 0) = std::sqrt(2.0);
  A.set_entry(0, 0, std::move(m));
  CompositeProblem p{{SeparableComponent::quadratic_indicator(
                         {0.0}, ConvexSet::whole_space(1))},
                     {SeparableComponent::indicator(
                         ConvexSet::hyperplane({1.0}, 0.0))},
                     std::move(A)};
  p.validate();
  ReferenceSolution ref;
  ref.x_star = BlockVector(p.layout_I());
  ref.y_star = BlockVector(p.layout_J());
  ref.d_star = 0.0;

  auto probes = make_probe_points(p, ref, 300, 99);
  double sig = estimate_sigma(p, ref, probes);
  CHECK(sig == doctest::Approx(2.0).epsilon(1e-10));

  // probes sitting at y_star are skipped
  std::vector<BlockVector> degenerate(99, ref.y_star);
  CHECK_THROWS_AS(estimate_sigma(p, ref, degenerate), InsufficientDataError);

  // scale covariance: scaling D - D* by t scales the estimate by t
  BlockOperator A2(one, one);
  Matrix m2(1, 1);
  m2.at(0, 0) = 2.0;  // D(y) = 2 ||y||^2
  A2.set_entry(0, 0, std::move(m2));
  CompositeProblem p2{p.f, p.g, std::move(A2)};
  double sig2 = estimate_sigma(p2, ref, probes);
  CHECK(sig2 == doctest::Approx(2.0 * sig).epsilon(1e-10));
}

TEST_CASE("primal error bound formula") {
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  A.set_entry(0, 0, Matrix::identity(1));
  CompositeProblem p{{SeparableComponent::elastic_net(0.5)},
                     {SeparableComponent::indicator(
                         ConvexSet::box({0.0}, {1.0}))},
                     std::move(A)};
  p.validate();
  ProblemConstants c;
  c.rate = 0.9;
  // 2 * 0.1 * 5 * 1 * 0.9^2 = 0.81
  CHECK(primal_error_bound(0.1, 5.0, c, p, 2, 0) == doctest::Approx(0.81));
  // started at the optimum: the bound collapses to zero
  CHECK(primal_error_bound(0.1, 0.0, c, p, 7, 3) == 0.0);
  CHECK_THROWS(primal_error_bound(0.1, 1.0, c, p, 1, 3));
}

}  // TEST_SUITE
