#include "rdciag/desk.hpp"

#include "rdciag/rng.hpp"

namespace rdciag {

BestApproxSpec desk_best_approx() {
  BestApproxSpec spec;
  spec.v = {2.0, 1.5, 2.5, 1.0, 2.0};
  spec.omega0 = ConvexSet::box({0, 0, 0, 0, 0}, {3, 3, 3, 3, 3});
  spec.constraints = {
      ConvexSet::halfspace({1, 1, 0, 0, 0}, 2.0),
      ConvexSet::halfspace({0, 1, 1, 0, 0}, 2.0),
      ConvexSet::halfspace({0, 0, 1, 1, 1}, 3.0),
  };
  return spec;
}

AugL1Spec desk_aug_l1() {
  const int m = 10, n = 30;
  Rng rng(20240001ull);
  AugL1Spec spec;
  spec.A = Matrix(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) spec.A.at(r, c) = rng.normal();

  std::vector<double> x_true(n, 0.0);
  x_true[3] = 1.5;
  x_true[11] = -2.0;
  x_true[27] = 1.0;

  spec.b.assign(m, 0.0);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) spec.b[r] += spec.A.at(r, c) * x_true[c];
  spec.lambda = 0.1;
  return spec;
}

NumSpec desk_num() {
  NumSpec spec;
  spec.sources = {
      {UtilityKind::log1p, 0, 0, 10.0},
      {UtilityKind::log1p, 0, 0, 10.0},
      {UtilityKind::log1p, 0, 0, 10.0},
      {UtilityKind::log1p, 0, 0, 10.0},
  };
  spec.capacities = {1.0, 1.5, 2.0};
  spec.link_sources = {{0, 1, 2}, {1, 2, 3}, {0, 3}};
  spec.lambda = 0.1;
  return spec;
}

}  // namespace rdciag
