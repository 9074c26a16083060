#include <cmath>

#include "doctest.h"
#include "rdciag/problem.hpp"
#include "rdciag/rng.hpp"
#include "rdciag/solvers.hpp"

using namespace rdciag;

namespace {

// 1-D instance f = (1/2)(x-1)^2, g = indicator{0}, A = 1
CompositeProblem tiny_instance() {
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  A.set_entry(0, 0, Matrix::identity(1));
  CompositeProblem p{{SeparableComponent::quadratic_indicator(
                         {1.0}, ConvexSet::whole_space(1))},
                     {SeparableComponent::indicator(
                         ConvexSet::hyperplane({1.0}, 0.0))},
                     std::move(A)};
  p.validate();
  return p;
}

CompositeProblem small_random(Rng& rng, int nI, int nJ) {
  std::vector<int> idims(nI, 1);
  std::vector<int> jdims(nJ);
  for (auto& d : jdims) d = 1 + rng.uniform_int(2);
  LayoutPtr li = make_layout(idims), lj = make_layout(jdims);
  BlockOperator A(lj, li);
  for (int j = 0; j < nJ; ++j)
    for (int i = 0; i < nI; ++i)
      if (rng.uniform01() < 0.8) {
        Matrix m(jdims[j], 1);
        for (double& v : m.a) v = rng.normal();
        A.set_entry(j, i, std::move(m));
      }
  CompositeProblem p{{}, {}, std::move(A)};
  for (int i = 0; i < nI; ++i)
    p.f.push_back(SeparableComponent::elastic_net(0.2 + 0.5 * rng.uniform01()));
  for (int j = 0; j < nJ; ++j) {
    std::vector<double> lo(jdims[j], -2.0), hi(jdims[j], 2.0);
    p.g.push_back(SeparableComponent::indicator(ConvexSet::box(lo, hi)));
  }
  p.validate();
  return p;
}

}  // namespace

TEST_SUITE("problem") {

TEST_CASE("dual value on the 1-D instance") {
  CompositeProblem p = tiny_instance();
  // f*(u) = u + u^2/2 (checked by a grid oracle in the convex suite),
  // support of {0} is 0, so D(1) = f*(-1) = -1/2
  BlockVector y(p.layout_J());
  y.data[0] = 1.0;
  CHECK(dual_value(p, y) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("weak duality on random instances") {
  Rng rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    CompositeProblem p = small_random(rng, 3, 2);
    for (int t = 0; t < 20; ++t) {
      BlockVector y(p.layout_J());
      for (double& v : y.data) v = 0.5 * rng.normal();
      BlockVector x(p.layout_I());
      for (double& v : x.data) v = 0.5 * rng.normal();
      double f = primal_value(p, x), d = dual_value(p, y);
      if (std::isinf(f) || std::isinf(d)) continue;
      CHECK(f + d >= -1e-12);
    }
  }
}

TEST_CASE("duality gap examples") {
  CompositeProblem p = tiny_instance();
  // optimum: x = 0 forced, y = f'(0)... gap 0 at the KKT pair
  ReferenceSolution ref = compute_reference(p, 2000);
  CHECK(duality_gap(p, ref.x_star, ref.y_star) <= 1e-8);

  // random non-optimal pair has strictly positive gap
  BlockVector x(p.layout_I()), y(p.layout_J());
  x.data[0] = 0.0;
  y.data[0] = 0.3;
  CHECK(duality_gap(p, x, y) > 1e-3);
}

TEST_CASE("gap is invariant under permuting dual blocks") {
  Rng rng(67);
  CompositeProblem p = small_random(rng, 2, 3);
  // same grid with rows 0 and 2 swapped
  std::vector<int> jdims = {p.layout_J()->dim(2), p.layout_J()->dim(1),
                            p.layout_J()->dim(0)};
  BlockOperator A2(make_layout(jdims), p.layout_I());
  for (const auto& e : p.A.entries()) {
    int nj = e.j == 0 ? 2 : (e.j == 2 ? 0 : 1);
    A2.set_entry(nj, e.i, e.m);
  }
  CompositeProblem q{p.f, {p.g[2], p.g[1], p.g[0]}, std::move(A2)};
  q.validate();

  BlockVector x(p.layout_I());
  for (double& v : x.data) v = 0.3 * rng.normal();
  BlockVector y(p.layout_J());
  for (double& v : y.data) v = 0.3 * rng.normal();
  BlockVector y2(q.layout_J());
  for (int b : {0, 1, 2}) {
    auto src = y.block(b);
    auto dst = y2.block(b == 0 ? 2 : (b == 2 ? 0 : 1));
    std::copy(src.begin(), src.end(), dst.begin());
  }
  double g1 = duality_gap(p, x, y), g2 = duality_gap(q, x, y2);
  if (std::isinf(g1)) {
    CHECK(std::isinf(g2));
  } else {
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-12));
  }
}

TEST_CASE("lipschitz constant formula") {
  // one i, |J| = 1, identity, mu = 2 -> 0.5
  LayoutPtr one = make_layout({1});
  BlockOperator A(one, one);
  A.set_entry(0, 0, Matrix::identity(1));
  CompositeProblem p{{SeparableComponent::neg_utility(
                         UtilityKind::concave_quadratic, 0, 0, 1, 2.0)},
                     {SeparableComponent::indicator(ConvexSet::box({0}, {1}))},
                     std::move(A)};
  auto ell = lipschitz_constants(p);
  CHECK(ell[0] == doctest::Approx(0.5).epsilon(1e-12));

  // one i, |J| = 2, block norms 3 and 4, mu = 1 -> sqrt(25 * 2 * 16)
  BlockOperator A2(make_layout({1, 1}), one);
  Matrix m3(1, 1), m4(1, 1);
  m3.at(0, 0) = 3.0;
  m4.at(0, 0) = 4.0;
  A2.set_entry(0, 0, std::move(m3));
  A2.set_entry(1, 0, std::move(m4));
  CompositeProblem p2{{SeparableComponent::elastic_net(0.5)},
                      {SeparableComponent::indicator(ConvexSet::box({0}, {1})),
                       SeparableComponent::indicator(ConvexSet::box({0}, {1}))},
                      std::move(A2)};
  auto ell2 = lipschitz_constants(p2);
  CHECK(ell2[0] == doctest::Approx(std::sqrt(800.0)).epsilon(1e-12));
}

TEST_CASE("empirical Lipschitz ratios stay below ell_i") {
  Rng rng(71);
  CompositeProblem p = small_random(rng, 4, 3);
  auto ell = lipschitz_constants(p);
  for (int rep = 0; rep < 1000; ++rep) {
    BlockVector y(p.layout_J()), z(p.layout_J());
    for (double& v : y.data) v = 2.0 * rng.normal();
    for (double& v : z.data) v = 2.0 * rng.normal();
    BlockVector uy = adjoint_apply(p.A, y), uz = adjoint_apply(p.A, z);
    double dy = std::sqrt(dist2(y, z));
    for (int i = 0; i < p.nI(); ++i) {
      double nu = -uy.block(i)[0], nv = -uz.block(i)[0];
      double xi, zi;
      p.f[i].conjugate_grad({&nu, 1}, {&xi, 1});
      p.f[i].conjugate_grad({&nv, 1}, {&zi, 1});
      double dx = xi - zi, g2 = 0.0;
      for (int idx : p.A.col_entries(i)) {
        const auto& e = p.A.entries()[idx];
        for (int r = 0; r < e.m.rows; ++r) g2 += e.m.at(r, 0) * dx * e.m.at(r, 0) * dx;
      }
      CHECK(std::sqrt(g2) <= ell[i] * dy * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("z0 solver") {
  CHECK(std::isinf(solve_z0(0, 0.9, 2.0)));
  // tau=1, beta=1/2, gamma=1 reduces to z^2/2 = 1
  CHECK(solve_z0(1, 0.5, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  double prev = kInf;
  for (int tau : {1, 2, 4, 8}) {
    double z = solve_z0(tau, 0.5, 1.0);
    double lhs = std::pow((1.0 + z) / (1.0 + 0.5 * z), tau);
    double rhs = 1.0 + 1.0 / (1.0 + z);
    CHECK(z > 0.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    CHECK(z < prev);
    prev = z;
  }
}

TEST_CASE("step size and rate") {
  // eta1 = eta2 = 1, |J| = 1, tau = 0, sigma = 1 -> alpha_max = 1/8
  ProblemConstants c;
  c.eta1 = c.eta2 = 1.0;
  c.z0 = kInf;
  double am = std::min(c.eta2 / 8.0, 1.0 / (4.0 * (c.eta1 + c.eta2)));
  CHECK(am == doctest::Approx(1.0 / 8.0));
  CHECK(convergence_rate(1.0 / 8.0, 1.0, 1) == doctest::Approx(8.0 / 9.0));
  // decreasing in alpha
  double last = 1.0;
  for (double a = 0.01; a < 1.0; a += 0.05) {
    double r = convergence_rate(a, 1.0, 2);
    CHECK(r < last);
    last = r;
  }
}

TEST_CASE("constants on a built problem") {
  CompositeProblem p = tiny_instance();
  ProblemConstants c = compute_constants(p, 0, 1.0);
  CHECK(c.beta == doctest::Approx(0.0));
  CHECK(std::isinf(c.z0));
  CHECK(c.alpha_max > 0.0);
  CHECK(c.rate > 0.0);
  CHECK(c.rate < 1.0);
  CHECK(c.alpha == c.alpha_max);

  ProblemConstants c2 = compute_constants(p, 2, 1.0, 0.01);
  CHECK(c2.alpha == 0.01);
  CHECK(std::isfinite(c2.z0));
  CHECK(c2.z0 > 0.0);
}

TEST_CASE("reference solution round trip and validation") {
  CompositeProblem p = tiny_instance();
  ReferenceSolution ref = compute_reference(p, 5000);
  std::string path = "test_ref_roundtrip.txt";
  save_reference(ref, path);
  ReferenceSolution back = load_reference(path, p);
  CHECK(back.d_star == ref.d_star);
  CHECK(dist2(back.x_star, ref.x_star) == 0.0);
  CHECK(dist2(back.y_star, ref.y_star) == 0.0);

  // a pair with a large gap must be rejected at load time
  ReferenceSolution bad = ref;
  bad.y_star.data[0] += 1.0;
  save_reference(bad, path);
  CHECK_THROWS(load_reference(path, p));
  std::remove(path.c_str());
}

}  // TEST_SUITE
