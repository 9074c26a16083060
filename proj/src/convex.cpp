#include "rdciag/convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdciag {

namespace {

double dot_s(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_s(std::span<const double> a) { return std::sqrt(dot_s(a, a)); }

double soft_threshold(double u, double t) {
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

}  // namespace

ConvexSet ConvexSet::whole_space(int dim) {
  ConvexSet s;
  s.kind = SetKind::whole;
  s.dim = dim;
  return s;
}

ConvexSet ConvexSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("box: bound dimensions disagree");
  for (size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("box: lo > hi");
  ConvexSet s;
  s.kind = SetKind::box;
  s.dim = static_cast<int>(lo.size());
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

ConvexSet ConvexSet::hyperplane(std::vector<double> a, double b) {
  double n = 0.0;
  for (double c : a) n += c * c;
  if (n == 0.0) throw std::invalid_argument("hyperplane: zero normal");
  ConvexSet s;
  s.kind = SetKind::hyperplane;
  s.dim = static_cast<int>(a.size());
  s.normal = std::move(a);
  s.rhs = b;
  return s;
}

ConvexSet ConvexSet::halfspace(std::vector<double> a, double c) {
  double n = 0.0;
  for (double v : a) n += v * v;
  if (n == 0.0) throw std::invalid_argument("halfspace: zero normal");
  ConvexSet s;
  s.kind = SetKind::halfspace;
  s.dim = static_cast<int>(a.size());
  s.normal = std::move(a);
  s.rhs = c;
  return s;
}

ConvexSet ConvexSet::ball(std::vector<double> center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball: radius must be > 0");
  ConvexSet s;
  s.kind = SetKind::ball;
  s.dim = static_cast<int>(center.size());
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

void project_set(const ConvexSet& s, std::span<const double> x,
                 std::span<double> out) {
  if (static_cast<int>(x.size()) != s.dim)
    throw DimensionError("project_set: dimension mismatch");
  switch (s.kind) {
    case SetKind::whole:
      std::copy(x.begin(), x.end(), out.begin());
      return;
    case SetKind::box:
      for (size_t i = 0; i < x.size(); ++i)
        out[i] = std::min(std::max(x[i], s.lo[i]), s.hi[i]);
      return;
    case SetKind::hyperplane: {
      double t = (dot_s(s.normal, x) - s.rhs) / dot_s(s.normal, s.normal);
      for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - t * s.normal[i];
      return;
    }
    case SetKind::halfspace: {
      double viol = dot_s(s.normal, x) - s.rhs;
      if (viol <= 0.0) {
        std::copy(x.begin(), x.end(), out.begin());
      } else {
        double t = viol / dot_s(s.normal, s.normal);
        for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - t * s.normal[i];
      }
      return;
    }
    case SetKind::ball: {
      double d = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        double c = x[i] - s.center[i];
        d += c * c;
      }
      d = std::sqrt(d);
      if (d <= s.radius) {
        std::copy(x.begin(), x.end(), out.begin());
      } else {
        double t = s.radius / d;
        for (size_t i = 0; i < x.size(); ++i)
          out[i] = s.center[i] + t * (x[i] - s.center[i]);
      }
      return;
    }
  }
}

double set_distance(const ConvexSet& s, std::span<const double> x) {
  switch (s.kind) {
    case SetKind::whole:
      return 0.0;
    case SetKind::box: {
      double d2 = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        double c = std::min(std::max(x[i], s.lo[i]), s.hi[i]) - x[i];
        d2 += c * c;
      }
      return std::sqrt(d2);
    }
    case SetKind::hyperplane:
      return std::abs(dot_s(s.normal, x) - s.rhs) / norm_s(s.normal);
    case SetKind::halfspace:
      return std::max(0.0, dot_s(s.normal, x) - s.rhs) / norm_s(s.normal);
    case SetKind::ball: {
      double d = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        double c = x[i] - s.center[i];
        d += c * c;
      }
      return std::max(0.0, std::sqrt(d) - s.radius);
    }
  }
  return 0.0;
}

double set_support(const ConvexSet& s, std::span<const double> y) {
  switch (s.kind) {
    case SetKind::whole: {
      // conjugate of the zero-set indicator is the indicator of {0}
      return norm_s(y) <= 1e-12 ? 0.0 : kInf;
    }
    case SetKind::box: {
      double v = 0.0;
      for (size_t i = 0; i < y.size(); ++i)
        v += std::max(y[i] * s.lo[i], y[i] * s.hi[i]);
      return v;
    }
    case SetKind::hyperplane:
    case SetKind::halfspace: {
      // finite only along (the nonnegative side of) span(a)
      double an2 = dot_s(s.normal, s.normal);
      double t = dot_s(s.normal, y) / an2;
      double r2 = 0.0;
      for (size_t i = 0; i < y.size(); ++i) {
        double c = y[i] - t * s.normal[i];
        r2 += c * c;
      }
      double yn = norm_s(y);
      if (std::sqrt(r2) > kSpanTol * yn) return kInf;
      if (s.kind == SetKind::halfspace && t * std::sqrt(an2) < -kSpanTol * yn)
        return kInf;
      return t * s.rhs;
    }
    case SetKind::ball:
      return dot_s(y, s.center) + s.radius * norm_s(y);
  }
  return kInf;
}

SeparableComponent SeparableComponent::quadratic_indicator(
    std::vector<double> v, ConvexSet omega0) {
  if (omega0.dim != static_cast<int>(v.size()))
    throw DimensionError("quadratic_indicator: set vs center dims disagree");
  SeparableComponent c;
  c.kind_ = ComponentKind::quadratic_plus_indicator;
  c.dim_ = static_cast<int>(v.size());
  c.mu_ = 1.0;
  c.v_ = std::move(v);
  c.set_ = std::move(omega0);
  return c;
}

SeparableComponent SeparableComponent::elastic_net(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("elastic_net: lambda < 0");
  SeparableComponent c;
  c.kind_ = ComponentKind::elastic_net_scalar;
  c.dim_ = 1;
  c.mu_ = 1.0;
  c.lambda_ = lambda;
  return c;
}

SeparableComponent SeparableComponent::neg_utility(UtilityKind u, double q,
                                                   double p, double cap,
                                                   double lambda) {
  if (cap <= 0.0) throw std::invalid_argument("neg_utility: cap must be > 0");
  if (p < 0.0) throw std::invalid_argument("neg_utility: p must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("neg_utility: lambda < 0");
  SeparableComponent c;
  c.kind_ = ComponentKind::neg_utility_boxed;
  c.dim_ = 1;
  c.mu_ = lambda;
  c.lambda_ = lambda;
  c.util_ = u;
  c.q_ = q;
  c.p_ = p;
  c.cap_ = cap;
  return c;
}

SeparableComponent SeparableComponent::indicator(ConvexSet s) {
  SeparableComponent c;
  c.kind_ = ComponentKind::indicator_set;
  c.dim_ = s.dim;
  c.mu_ = 0.0;
  c.set_ = std::move(s);
  return c;
}

double SeparableComponent::utility(double x) const {
  switch (util_) {
    case UtilityKind::log1p:
      return std::log1p(x);
    case UtilityKind::concave_quadratic:
      return q_ * x - 0.5 * p_ * x * x;
  }
  return 0.0;
}

double SeparableComponent::utility_d1(double x) const {
  switch (util_) {
    case UtilityKind::log1p:
      return 1.0 / (1.0 + x);
    case UtilityKind::concave_quadratic:
      return q_ - p_ * x;
  }
  return 0.0;
}

double SeparableComponent::utility_d2(double x) const {
  switch (util_) {
    case UtilityKind::log1p: {
      double d = 1.0 + x;
      return -1.0 / (d * d);
    }
    case UtilityKind::concave_quadratic:
      return -p_;
  }
  return 0.0;
}

double SeparableComponent::boxed_minimizer(double w, double extra_quad) const {
  const double quad = lambda_ + extra_quad;
  auto d1 = [&](double x) { return quad * x - utility_d1(x) - w; };
  auto d2 = [&](double x) { return quad - utility_d2(x); };

  if (d1(0.0) >= 0.0) return 0.0;
  if (d1(cap_) <= 0.0) return cap_;

  // guarded Newton on the derivative with a shrinking bisection bracket
  double lo = 0.0, hi = cap_;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double g = d1(x);
    if (std::abs(g) <= 1e-12) return x;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    double step = g / d2(x);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * cap_) return 0.5 * (lo + hi);
    x = xn;
  }
  return x;
}

double SeparableComponent::value(std::span<const double> x) const {
  switch (kind_) {
    case ComponentKind::quadratic_plus_indicator: {
      double xn = norm_s(x);
      if (set_distance(set_, x) > kMembershipTol * (1.0 + xn)) return kInf;
      double s = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - v_[i];
        s += d * d;
      }
      return 0.5 * s;
    }
    case ComponentKind::elastic_net_scalar:
      return lambda_ * std::abs(x[0]) + 0.5 * x[0] * x[0];
    case ComponentKind::neg_utility_boxed: {
      double t = x[0];
      double tol = kMembershipTol * (1.0 + std::abs(t));
      if (t < -tol || t > cap_ + tol) return kInf;
      t = std::min(std::max(t, 0.0), cap_);
      return -utility(t) + 0.5 * lambda_ * t * t;
    }
    case ComponentKind::indicator_set: {
      double xn = norm_s(x);
      return set_distance(set_, x) <= kMembershipTol * (1.0 + xn) ? 0.0 : kInf;
    }
  }
  return kInf;
}

double SeparableComponent::conjugate_value(std::span<const double> u) const {
  switch (kind_) {
    case ComponentKind::quadratic_plus_indicator: {
      // f*(u) = <x*, u> - f(x*) at x* = P(v + u)
      std::vector<double> w(u.size());
      for (size_t i = 0; i < u.size(); ++i) w[i] = v_[i] + u[i];
      std::vector<double> xs(u.size());
      project_set(set_, w, xs);
      double val = 0.0;
      for (size_t i = 0; i < u.size(); ++i) {
        double d = xs[i] - v_[i];
        val += xs[i] * u[i] - 0.5 * d * d;
      }
      return val;
    }
    case ComponentKind::elastic_net_scalar: {
      double t = std::max(std::abs(u[0]) - lambda_, 0.0);
      return 0.5 * t * t;
    }
    case ComponentKind::neg_utility_boxed: {
      double xs = boxed_minimizer(u[0], 0.0);
      return u[0] * xs + utility(xs) - 0.5 * lambda_ * xs * xs;
    }
    case ComponentKind::indicator_set:
      return set_support(set_, u);
  }
  return kInf;
}

void SeparableComponent::prox(std::span<const double> y, double alpha,
                              std::span<double> out) const {
  switch (kind_) {
    case ComponentKind::quadratic_plus_indicator: {
      std::vector<double> z(y.size());
      for (size_t i = 0; i < y.size(); ++i)
        z[i] = (y[i] + alpha * v_[i]) / (1.0 + alpha);
      project_set(set_, z, out);
      return;
    }
    case ComponentKind::elastic_net_scalar:
      out[0] = soft_threshold(y[0], alpha * lambda_) / (1.0 + alpha);
      return;
    case ComponentKind::neg_utility_boxed:
      out[0] = boxed_minimizer(y[0] / alpha, 1.0 / alpha);
      return;
    case ComponentKind::indicator_set:
      project_set(set_, y, out);
      return;
  }
}

void SeparableComponent::prox_conjugate(std::span<const double> y, double alpha,
                                        std::span<double> out) const {
  // Closed forms keep the result exactly inside dom phi* where that domain
  // is thin (a span or a point); otherwise Moreau decomposition.
  if (kind_ == ComponentKind::indicator_set) {
    switch (set_.kind) {
      case SetKind::whole:
        std::fill(out.begin(), out.end(), 0.0);
        return;
      case SetKind::hyperplane: {
        double t = (dot_s(set_.normal, y) - alpha * set_.rhs) /
                   dot_s(set_.normal, set_.normal);
        for (size_t i = 0; i < y.size(); ++i) out[i] = t * set_.normal[i];
        return;
      }
      case SetKind::halfspace: {
        double t = std::max(0.0, dot_s(set_.normal, y) - alpha * set_.rhs) /
                   dot_s(set_.normal, set_.normal);
        for (size_t i = 0; i < y.size(); ++i) out[i] = t * set_.normal[i];
        return;
      }
      default:
        break;
    }
  }
  // prox_{alpha phi*}(y) = y - alpha prox_{phi/alpha}(y/alpha)
  std::vector<double> z(y.size());
  for (size_t i = 0; i < y.size(); ++i) z[i] = y[i] / alpha;
  std::vector<double> pz(y.size());
  prox(z, 1.0 / alpha, pz);
  for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] - alpha * pz[i];
}

void SeparableComponent::conjugate_grad(std::span<const double> u,
                                        std::span<double> out) const {
  switch (kind_) {
    case ComponentKind::quadratic_plus_indicator: {
      std::vector<double> w(u.size());
      for (size_t i = 0; i < u.size(); ++i) w[i] = v_[i] + u[i];
      project_set(set_, w, out);
      return;
    }
    case ComponentKind::elastic_net_scalar:
      out[0] = soft_threshold(u[0], lambda_);
      return;
    case ComponentKind::neg_utility_boxed:
      if (mu_ <= 0.0)
        throw UnsupportedComponentError(
            "conjugate_grad: component is not strongly convex (lambda = 0)");
      out[0] = boxed_minimizer(u[0], 0.0);
      return;
    case ComponentKind::indicator_set:
      throw UnsupportedComponentError(
          "conjugate_grad: indicator components have mu = 0");
  }
}

std::pair<double, double> pair_values(const SeparableComponent& phi,
                                      std::span<const double> x,
                                      std::span<const double> u) {
  return {phi.value(x), phi.conjugate_value(u)};
}

}  // namespace rdciag
