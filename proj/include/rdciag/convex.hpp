#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "rdciag/errors.hpp"

namespace rdciag {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for "x belongs to the set" when evaluating indicator
// values: iterates reach constraint sets only in the limit, so exact
// membership would keep every primal value at +inf.
inline constexpr double kMembershipTol = 1e-11;

// Relative tolerance for "y lies in span(a)" when evaluating support
// functions of hyperplanes/halfspaces (the conjugate is +inf off the span).
inline constexpr double kSpanTol = 1e-8;

enum class SetKind { whole, box, hyperplane, halfspace, ball };

struct ConvexSet {
  SetKind kind = SetKind::whole;
  int dim = 0;
  std::vector<double> lo, hi;      // box
  std::vector<double> normal;      // hyperplane <a,x> = rhs; halfspace <a,x> <= rhs
  double rhs = 0.0;
  std::vector<double> center;     // ball
  double radius = 0.0;

  static ConvexSet whole_space(int dim);
  static ConvexSet box(std::vector<double> lo, std::vector<double> hi);
  static ConvexSet hyperplane(std::vector<double> a, double b);
  static ConvexSet halfspace(std::vector<double> a, double c);
  static ConvexSet ball(std::vector<double> center, double radius);
};

// Euclidean projection, closed form per kind.
void project_set(const ConvexSet& s, std::span<const double> x,
                 std::span<double> out);

// Euclidean distance d(x, S) = ||x - P_S(x)||, closed form per kind.
double set_distance(const ConvexSet& s, std::span<const double> x);

// Support function sup_{x in S} <y, x>; +inf outside its domain.
double set_support(const ConvexSet& s, std::span<const double> y);

enum class ComponentKind {
  quadratic_plus_indicator,  // (1/2)||x - v||^2 + indicator(omega0), mu = 1
  elastic_net_scalar,        // lambda|x| + (1/2)x^2, mu = 1
  neg_utility_boxed,         // -u(x) + indicator[0, cap] + (lambda/2)x^2, mu = lambda
  indicator_set,             // indicator(S), mu = 0
};

enum class UtilityKind { log1p, concave_quadratic };

// One separable convex piece f_i or g_j: value, conjugate value, prox,
// conjugate prox (Moreau) and conjugate gradient where mu > 0.
class SeparableComponent {
 public:
  static SeparableComponent quadratic_indicator(std::vector<double> v,
                                                ConvexSet omega0);
  static SeparableComponent elastic_net(double lambda);
  // utility: log1p -> u(x) = log(1 + x); concave_quadratic -> u(x) = qx - (p/2)x^2
  static SeparableComponent neg_utility(UtilityKind u, double q, double p,
                                        double cap, double lambda);
  static SeparableComponent indicator(ConvexSet s);

  ComponentKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double mu() const { return mu_; }
  const ConvexSet& set() const { return set_; }

  double value(std::span<const double> x) const;            // may be +inf
  double conjugate_value(std::span<const double> u) const;  // may be +inf
  void prox(std::span<const double> y, double alpha, std::span<double> out) const;
  void prox_conjugate(std::span<const double> y, double alpha,
                      std::span<double> out) const;
  // grad of the conjugate; throws UnsupportedComponentError when mu == 0.
  void conjugate_grad(std::span<const double> u, std::span<double> out) const;

 private:
  SeparableComponent() = default;

  double utility(double x) const;
  double utility_d1(double x) const;
  double utility_d2(double x) const;
  // minimizer over [0, cap] of (lambda/2 + extra_quad/2) x^2 - u(x) - w x
  double boxed_minimizer(double w, double extra_quad) const;

  ComponentKind kind_ = ComponentKind::indicator_set;
  int dim_ = 0;
  double mu_ = 0.0;
  std::vector<double> v_;    // quadratic_plus_indicator center
  ConvexSet set_;            // omega0 / indicator set
  double lambda_ = 0.0;      // elastic net / NUM regularization
  UtilityKind util_ = UtilityKind::log1p;
  double q_ = 0.0, p_ = 0.0;
  double cap_ = 0.0;
};

// (phi(x), phi*(u)) in one call.
std::pair<double, double> pair_values(const SeparableComponent& phi,
                                      std::span<const double> x,
                                      std::span<const double> u);

}  // namespace rdciag
