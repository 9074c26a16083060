#include "rdciag/apps.hpp"

#include <cmath>
#include <string>

namespace rdciag {

namespace {

void warn(BuildNotes* notes, const std::string& msg) {
  if (notes) notes->warnings.push_back(msg);
}

}  // namespace

CompositeProblem build_best_approximation(const BestApproxSpec& spec,
                                          BuildNotes* notes) {
  const int n = static_cast<int>(spec.v.size());
  if (n == 0) throw std::invalid_argument("best_approx: empty point v");
  if (spec.omega0.dim != n)
    throw DimensionError("best_approx: omega0 dimension mismatch");
  const int m = static_cast<int>(spec.constraints.size());
  for (const auto& s : spec.constraints)
    if (s.dim != n)
      throw DimensionError("best_approx: constraint dimension mismatch");

  LayoutPtr li = make_layout({n});
  std::vector<int> jd(m, n);
  LayoutPtr lj = make_layout(jd);
  BlockOperator A(lj, li);
  for (int j = 0; j < m; ++j) A.set_entry(j, 0, Matrix::identity(n));

  CompositeProblem p{{SeparableComponent::quadratic_indicator(spec.v,
                                                              spec.omega0)},
                     {},
                     std::move(A)};
  for (int j = 0; j < m; ++j)
    p.g.push_back(SeparableComponent::indicator(spec.constraints[j]));
  p.validate();

  // alternating-projection probe that the intersection is nonempty
  std::vector<double> x = spec.v, px(n);
  for (int it = 0; it < 2000; ++it) {
    project_set(spec.omega0, x, px);
    x = px;
    for (const auto& s : spec.constraints) {
      project_set(s, x, px);
      x = px;
    }
  }
  double worst = set_distance(spec.omega0, x);
  for (const auto& s : spec.constraints)
    worst = std::max(worst, set_distance(s, x));
  if (worst > 1e-6)
    warn(notes,
         "best_approx: alternating projections did not certify a common "
         "point (residual " + std::to_string(worst) + ")");
  return p;
}

CompositeProblem build_augmented_l1(const AugL1Spec& spec, BuildNotes* notes) {
  const int m = spec.A.rows;
  const int n = spec.A.cols;
  if (m == 0 || n == 0) throw std::invalid_argument("aug_l1: empty matrix");
  if (static_cast<int>(spec.b.size()) != m)
    throw DimensionError("aug_l1: rhs length mismatch");
  if (spec.lambda <= 0.0)
    throw std::invalid_argument("aug_l1: lambda must be > 0");
  for (int r = 0; r < m; ++r) {
    double rn = 0.0;
    for (int c = 0; c < n; ++c) rn += spec.A.at(r, c) * spec.A.at(r, c);
    if (rn == 0.0) throw std::invalid_argument("aug_l1: zero row");
  }

  LayoutPtr li = make_layout(std::vector<int>(n, 1));
  LayoutPtr lj = make_layout(std::vector<int>(m, n));
  BlockOperator A(lj, li);
  // A_ji embeds scalar x_i into coordinate i of block j, so (A x)_j is a
  // copy of x and (A* y)_i = sum_j y_ji
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      Matrix sel(n, 1);
      sel.at(i, 0) = 1.0;
      A.set_entry(j, i, std::move(sel));
    }
  }

  CompositeProblem p{{}, {}, std::move(A)};
  for (int i = 0; i < n; ++i)
    p.f.push_back(SeparableComponent::elastic_net(spec.lambda));
  for (int j = 0; j < m; ++j) {
    std::vector<double> row(n);
    for (int c = 0; c < n; ++c) row[c] = spec.A.at(j, c);
    p.g.push_back(
        SeparableComponent::indicator(ConvexSet::hyperplane(row, spec.b[j])));
  }
  p.validate();

  // consistency probe: least squares via normal-equation gradient descent
  {
    std::vector<double> x(n, 0.0), r(m), g(n);
    double lip = 0.0;
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < n; ++c) lip += spec.A.at(j, c) * spec.A.at(j, c);
    double step = lip > 0 ? 1.0 / lip : 1.0;
    for (int it = 0; it < 5000; ++it) {
      for (int j = 0; j < m; ++j) {
        r[j] = -spec.b[j];
        for (int c = 0; c < n; ++c) r[j] += spec.A.at(j, c) * x[c];
      }
      std::fill(g.begin(), g.end(), 0.0);
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < n; ++c) g[c] += spec.A.at(j, c) * r[j];
      for (int c = 0; c < n; ++c) x[c] -= step * g[c];
    }
    double res = 0.0;
    for (int j = 0; j < m; ++j) {
      double s = -spec.b[j];
      for (int c = 0; c < n; ++c) s += spec.A.at(j, c) * x[c];
      res += s * s;
    }
    if (std::sqrt(res) > 1e-8)
      warn(notes, "aug_l1: Ax = b may be inconsistent (residual " +
                      std::to_string(std::sqrt(res)) + ")");
  }
  return p;
}

CompositeProblem build_num(const NumSpec& spec, BuildNotes* notes) {
  (void)notes;
  const int ns = static_cast<int>(spec.sources.size());
  const int nl = static_cast<int>(spec.capacities.size());
  if (ns == 0 || nl == 0) throw std::invalid_argument("num: empty network");
  if (static_cast<int>(spec.link_sources.size()) != nl)
    throw std::invalid_argument("num: link membership count mismatch");
  if (spec.lambda <= 0.0)
    throw std::invalid_argument(
        "num: lambda must be > 0 (strong convexity of the source objectives)");

  std::vector<int> used(ns, 0);
  for (int l = 0; l < nl; ++l) {
    if (spec.capacities[l] <= 0.0)
      throw std::invalid_argument("num: capacities must be > 0");
    for (int s : spec.link_sources[l]) {
      if (s < 0 || s >= ns)
        throw std::invalid_argument("num: link names an unknown source");
      ++used[s];
    }
  }
  for (int s = 0; s < ns; ++s) {
    if (!used[s])
      throw std::invalid_argument("num: every source must use >= 1 link");
    if (spec.sources[s].cap <= 0.0)
      throw std::invalid_argument("num: rate caps must be > 0");
  }

  LayoutPtr li = make_layout(std::vector<int>(ns, 1));
  LayoutPtr lj = make_layout(std::vector<int>(nl, 1));
  BlockOperator A(lj, li);
  for (int l = 0; l < nl; ++l) {
    for (int s : spec.link_sources[l]) {
      Matrix one(1, 1);
      one.at(0, 0) = 1.0;
      A.set_entry(l, s, std::move(one));
    }
  }

  CompositeProblem p{{}, {}, std::move(A)};
  for (int s = 0; s < ns; ++s) {
    const NumSource& src = spec.sources[s];
    p.f.push_back(SeparableComponent::neg_utility(src.utility, src.q, src.p,
                                                  src.cap, spec.lambda));
  }
  for (int l = 0; l < nl; ++l)
    p.g.push_back(SeparableComponent::indicator(
        ConvexSet::halfspace({1.0}, spec.capacities[l])));
  p.validate();
  return p;
}

}  // namespace rdciag
