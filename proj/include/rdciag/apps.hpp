#pragma once

#include <vector>

#include "rdciag/problem.hpp"
#include "rdciag/solvers.hpp"

namespace rdciag {

// Best approximation of v over the intersection of omega0 with the given
// constraint sets: f = (1/2)||x-v||^2 + indicator(omega0), one g per set,
// every A_j the identity.
struct BestApproxSpec {
  std::vector<double> v;
  ConvexSet omega0;
  std::vector<ConvexSet> constraints;
};

// min lambda ||x||_1 + (1/2)||x||^2 s.t. Ax = b, split into scalar f_i and
// one hyperplane indicator per row; A_ji is the i-th coordinate selector.
struct AugL1Spec {
  Matrix A;
  std::vector<double> b;
  double lambda = 0.0;
};

struct NumSource {
  UtilityKind utility = UtilityKind::log1p;
  double q = 0.0, p = 0.0;  // concave_quadratic parameters
  double cap = 0.0;         // rate bound M_s
};

// Network utility maximization: f_s = -u_s + indicator[0, M_s] +
// (lambda/2) x^2 per source, one capacity halfspace per link.
struct NumSpec {
  std::vector<NumSource> sources;
  std::vector<double> capacities;          // per link
  std::vector<std::vector<int>> link_sources;  // sources using each link
  double lambda = 0.0;
};

struct BuildNotes {
  std::vector<std::string> warnings;
};

CompositeProblem build_best_approximation(const BestApproxSpec& spec,
                                          BuildNotes* notes = nullptr);
CompositeProblem build_augmented_l1(const AugL1Spec& spec,
                                    BuildNotes* notes = nullptr);
CompositeProblem build_num(const NumSpec& spec, BuildNotes* notes = nullptr);

}  // namespace rdciag
