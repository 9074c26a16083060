#include <cmath>

#include "doctest.h"
#include "rdciag/block_operator.hpp"
#include "rdciag/rng.hpp"

using namespace rdciag;

namespace {

// oracle: assemble the full dense matrix of a block operator
std::vector<std::vector<double>> assemble_dense(const BlockOperator& a) {
  int rows = a.row_layout()->total();
  int cols = a.col_layout()->total();
  std::vector<std::vector<double>> d(rows, std::vector<double>(cols, 0.0));
  for (const auto& e : a.entries()) {
    int r0 = a.row_layout()->offset(e.j);
    int c0 = a.col_layout()->offset(e.i);
    for (int r = 0; r < e.m.rows; ++r)
      for (int c = 0; c < e.m.cols; ++c) d[r0 + r][c0 + c] = e.m.at(r, c);
  }
  return d;
}

// oracle: largest singular value of a 2x2 by closed-form eigenvalues of M^T M
double norm2x2(double a, double b, double c, double d) {
  double g11 = a * a + c * c, g22 = b * b + d * d, g12 = a * b + c * d;
  double tr = g11 + g22, det = g11 * g22 - g12 * g12;
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return std::sqrt(tr / 2.0 + disc);
}

BlockOperator random_operator(Rng& rng, int nJ, int nI, double fill,
                              int max_dim = 4) {
  std::vector<int> idims(nI), jdims(nJ);
  for (auto& d : idims) d = 1 + rng.uniform_int(max_dim);
  for (auto& d : jdims) d = 1 + rng.uniform_int(max_dim);
  BlockOperator a(make_layout(jdims), make_layout(idims));
  for (int j = 0; j < nJ; ++j)
    for (int i = 0; i < nI; ++i)
      if (rng.uniform01() < fill) {
        Matrix m(jdims[j], idims[i]);
        for (double& v : m.a) v = rng.normal();
        a.set_entry(j, i, std::move(m));
      }
  return a;
}

}  // namespace

TEST_SUITE("block") {

TEST_CASE("layout invariants") {
  BlockLayout l({2, 3, 1});
  CHECK(l.blocks() == 3);
  CHECK(l.total() == 6);
  CHECK(l.offset(2) == 5);
  CHECK_THROWS_AS(BlockLayout({2, 0}), DimensionError);
}

TEST_CASE("apply identity and zero grid") {
  LayoutPtr one = make_layout({1});
  BlockOperator id(one, one);
  id.set_entry(0, 0, Matrix::identity(1));
  BlockVector x(one);
  x.data[0] = 7.0;
  CHECK(apply(id, x).data[0] == 7.0);
  CHECK(adjoint_apply(id, x).data[0] == 7.0);

  BlockOperator empty(make_layout({2, 2}), make_layout({3}));
  BlockVector z(make_layout({3}));
  z.data = {1, 2, 3};
  BlockVector out = apply(empty, z);
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("apply matches the assembled dense matrix") {
  Rng rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    BlockOperator a = random_operator(rng, 3, 2, 0.8);
    auto dense = assemble_dense(a);
    BlockVector x(a.col_layout());
    for (double& v : x.data) v = rng.normal();
    BlockVector y = apply(a, x);
    for (int r = 0; r < a.row_layout()->total(); ++r) {
      double s = 0.0;
      for (int c = 0; c < a.col_layout()->total(); ++c)
        s += dense[r][c] * x.data[c];
      CHECK(y.data[r] == doctest::Approx(s).epsilon(1e-12));
    }
    BlockVector w(a.row_layout());
    for (double& v : w.data) v = rng.normal();
    BlockVector xt = adjoint_apply(a, w);
    for (int c = 0; c < a.col_layout()->total(); ++c) {
      double s = 0.0;
      for (int r = 0; r < a.row_layout()->total(); ++r)
        s += dense[r][c] * w.data[r];
      CHECK(xt.data[c] == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint identity on random operators") {
  Rng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    BlockOperator a = random_operator(rng, 1 + rng.uniform_int(4),
                                      1 + rng.uniform_int(4), 0.7);
    BlockVector x(a.col_layout()), y(a.row_layout());
    for (double& v : x.data) v = rng.normal();
    for (double& v : y.data) v = rng.normal();
    double lhs = dot(apply(a, x), y);
    double rhs = dot(x, adjoint_apply(a, y));
    CHECK(std::abs(lhs - rhs) <=
          1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
  }
}

TEST_CASE("single off-diagonal entry") {
  BlockOperator a(make_layout({1, 1}), make_layout({1}));
  Matrix two(1, 1);
  two.at(0, 0) = 2.0;
  a.set_entry(1, 0, std::move(two));
  BlockVector y(a.row_layout());
  y.data = {0.0, 5.0};
  CHECK(adjoint_apply(a, y).data[0] == 10.0);
}

TEST_CASE("spectral norm examples") {
  CHECK(spectral_norm(Matrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-10));
  Matrix d(2, 2);
  d.at(0, 0) = 3.0;
  d.at(1, 1) = 4.0;
  CHECK(spectral_norm(d) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(spectral_norm(Matrix(3, 2)) == 0.0);

  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    Matrix m(2, 2);
    for (double& v : m.a) v = rng.normal();
    double want = norm2x2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
    CHECK(spectral_norm(m) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("cached norms agree with fresh computation") {
  Rng rng(13);
  BlockOperator a = random_operator(rng, 3, 3, 0.9);
  for (const auto& e : a.entries()) {
    double fresh = spectral_norm(e.m);
    CHECK(std::abs(e.norm - fresh) <= 1e-10 * std::max(1.0, fresh));
  }
}

TEST_CASE("norm bound ||Ax|| <= sqrt(sum_j (sum_i ||A_ji||)^2) ||x||") {
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    BlockOperator a = random_operator(rng, 3, 3, 0.6);
    double bound2 = 0.0;
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int idx : a.row_entries(j)) s += a.entries()[idx].norm;
      bound2 += s * s;
    }
    BlockVector x(a.col_layout());
    for (double& v : x.data) v = rng.normal();
    CHECK(norm(apply(a, x)) <= std::sqrt(bound2) * norm(x) + 1e-12);
  }
}

TEST_CASE("embed_block") {
  LayoutPtr l = make_layout({1, 1});
  std::vector<double> v{5.0};
  BlockVector e = embed_block(l, 0, v);
  CHECK(e.data[0] == 5.0);
  CHECK(e.data[1] == 0.0);
  CHECK_THROWS_AS(embed_block(l, 2, v), DimensionError);

  Rng rng(19);
  LayoutPtr l2 = make_layout({2, 3, 1});
  BlockVector y(l2);
  for (double& c : y.data) c = rng.normal();
  // embedding is an isometry and the blocks partition the space
  BlockVector sum(l2);
  for (int q = 0; q < 3; ++q) {
    auto bq = y.block(q);
    BlockVector eq = embed_block(l2, q, bq);
    CHECK(norm(eq) == doctest::Approx(norm_span(bq)).epsilon(1e-14));
    axpy(1.0, eq, sum);
  }
  CHECK(dist2(sum, y) == doctest::Approx(0.0));
}

TEST_CASE("layout mismatch raises a dimension error") {
  BlockOperator a(make_layout({2}), make_layout({3}));
  BlockVector wrong(make_layout({2}));
  CHECK_THROWS_AS(apply(a, wrong), DimensionError);
  BlockVector wrong2(make_layout({3}));
  CHECK_THROWS_AS(adjoint_apply(a, wrong2), DimensionError);
}

}  // TEST_SUITE
