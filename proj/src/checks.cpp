#include "rdciag/checks.hpp"

#include <cmath>
#include <sstream>

#include "rdciag/desk.hpp"
#include "rdciag/diagnostics.hpp"
#include "rdciag/harness.hpp"

namespace rdciag::checks {

namespace {

ConvexSet random_set(Rng& rng, int dim) {
  switch (rng.uniform_int(5)) {
    case 0:
      return ConvexSet::whole_space(dim);
    case 1: {
      std::vector<double> lo(dim), hi(dim);
      for (int i = 0; i < dim; ++i) {
        double a = rng.normal(), b = rng.normal();
        lo[i] = std::min(a, b);
        hi[i] = std::max(a, b);
      }
      return ConvexSet::box(lo, hi);
    }
    case 2: {
      std::vector<double> a(dim);
      double n2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        a[i] = rng.normal();
        n2 += a[i] * a[i];
      }
      if (n2 == 0.0) a[0] = 1.0;
      return ConvexSet::hyperplane(a, rng.normal());
    }
    case 3: {
      std::vector<double> a(dim);
      double n2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        a[i] = rng.normal();
        n2 += a[i] * a[i];
      }
      if (n2 == 0.0) a[0] = 1.0;
      return ConvexSet::halfspace(a, rng.normal());
    }
    default: {
      std::vector<double> c(dim);
      for (int i = 0; i < dim; ++i) c[i] = rng.normal();
      return ConvexSet::ball(c, 0.2 + std::abs(rng.normal()));
    }
  }
}

SeparableComponent random_component(Rng& rng, ComponentKind kind, int dim) {
  switch (kind) {
    case ComponentKind::quadratic_plus_indicator: {
      std::vector<double> v(dim);
      for (int i = 0; i < dim; ++i) v[i] = rng.normal();
      return SeparableComponent::quadratic_indicator(v, random_set(rng, dim));
    }
    case ComponentKind::elastic_net_scalar:
      return SeparableComponent::elastic_net(0.1 + 1.9 * rng.uniform01());
    case ComponentKind::neg_utility_boxed: {
      bool log = rng.uniform_int(2) == 0;
      double lam = 0.1 + 1.9 * rng.uniform01();
      double cap = 0.5 + 4.5 * rng.uniform01();
      if (log)
        return SeparableComponent::neg_utility(UtilityKind::log1p, 0, 0, cap,
                                               lam);
      return SeparableComponent::neg_utility(UtilityKind::concave_quadratic,
                                             0.5 + 1.5 * rng.uniform01(),
                                             rng.uniform01(), cap, lam);
    }
    default:
      return SeparableComponent::indicator(random_set(rng, dim));
  }
}

std::vector<double> random_vec(Rng& rng, int dim, double scale = 1.0) {
  std::vector<double> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * rng.normal();
  return v;
}

// A small random problem with mu > 0 components; fill controls grid density.
CompositeProblem random_problem(Rng& rng, int nI, int nJ, double fill) {
  std::vector<int> idims(nI), jdims(nJ);
  std::vector<SeparableComponent> fs, gs;
  for (int i = 0; i < nI; ++i) {
    int pick = rng.uniform_int(3);
    int d = (pick == 0) ? 1 + rng.uniform_int(3) : 1;
    if (pick != 0)
      pick = 1 + rng.uniform_int(2);  // scalar kinds
    idims[i] = d;
    switch (pick) {
      case 0:
        fs.push_back(random_component(
            rng, ComponentKind::quadratic_plus_indicator, d));
        break;
      case 1:
        fs.push_back(
            random_component(rng, ComponentKind::elastic_net_scalar, 1));
        break;
      default:
        fs.push_back(
            random_component(rng, ComponentKind::neg_utility_boxed, 1));
        break;
    }
  }
  for (int j = 0; j < nJ; ++j) {
    int d = 1 + rng.uniform_int(3);
    jdims[j] = d;
    // sets whose support keeps D(0) finite make convenient duals
    switch (rng.uniform_int(3)) {
      case 0: {
        std::vector<double> lo(d), hi(d);
        for (int c = 0; c < d; ++c) {
          double a = rng.normal(), b = rng.normal();
          lo[c] = std::min(a, b);
          hi[c] = std::max(a, b);
        }
        gs.push_back(SeparableComponent::indicator(ConvexSet::box(lo, hi)));
        break;
      }
      case 1: {
        auto a = random_vec(rng, d);
        if (norm_span(a) == 0.0) a[0] = 1.0;
        gs.push_back(SeparableComponent::indicator(
            ConvexSet::halfspace(a, 0.5 + rng.uniform01())));
        break;
      }
      default: {
        auto c = random_vec(rng, d);
        gs.push_back(SeparableComponent::indicator(
            ConvexSet::ball(c, 0.3 + rng.uniform01())));
        break;
      }
    }
  }
  LayoutPtr li = make_layout(idims);
  LayoutPtr lj = make_layout(jdims);
  BlockOperator A(lj, li);
  for (int j = 0; j < nJ; ++j)
    for (int i = 0; i < nI; ++i)
      if (rng.uniform01() < fill || (i == j % nI)) {
        Matrix m(jdims[j], idims[i]);
        for (double& c : m.a) c = rng.normal();
        A.set_entry(j, i, std::move(m));
      }
  CompositeProblem p{std::move(fs), std::move(gs), std::move(A)};
  p.validate();
  return p;
}

double safe_pg_alpha(const CompositeProblem& p) {
  double an = operator_norm(p.A);
  double mu_min = kInf;
  for (const auto& fi : p.f) mu_min = std::min(mu_min, fi.mu());
  return an > 0.0 ? mu_min / (an * an) : 1.0;
}

CheckResult check_adjoint_identity() {
  CheckResult res{"adjoint_identity", true, 0, ""};
  Rng rng(101);
  for (int n = 0; n < 1000; ++n) {
    int nI = 1 + rng.uniform_int(4), nJ = 1 + rng.uniform_int(4);
    std::vector<int> idims(nI), jdims(nJ);
    int total = 0;
    for (auto& d : idims) total += (d = 1 + rng.uniform_int(4));
    for (auto& d : jdims) total += (d = 1 + rng.uniform_int(4));
    if (total > 64) {
      --n;
      continue;
    }
    LayoutPtr li = make_layout(idims), lj = make_layout(jdims);
    BlockOperator A(lj, li);
    for (int j = 0; j < nJ; ++j)
      for (int i = 0; i < nI; ++i)
        if (rng.uniform01() < 0.7) {
          Matrix m(jdims[j], idims[i]);
          for (double& c : m.a) c = rng.normal();
          A.set_entry(j, i, std::move(m));
        }
    BlockVector x(li), y(lj);
    for (double& c : x.data) c = rng.normal();
    for (double& c : y.data) c = rng.normal();
    double lhs = dot(apply(A, x), y);
    double rhs = dot(x, adjoint_apply(A, y));
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    ++res.cases;
    if (std::abs(lhs - rhs) > 1e-10 * scale) {
      res.pass = false;
      res.details = "adjoint identity violated";
      break;
    }
  }
  return res;
}

CheckResult check_moreau() {
  CheckResult res{"moreau_identity", true, 0, ""};
  Rng rng(202);
  const ComponentKind kinds[] = {ComponentKind::quadratic_plus_indicator,
                                 ComponentKind::elastic_net_scalar,
                                 ComponentKind::neg_utility_boxed,
                                 ComponentKind::indicator_set};
  for (ComponentKind kind : kinds) {
    for (int n = 0; n < 1000; ++n) {
      int dim = (kind == ComponentKind::quadratic_plus_indicator ||
                 kind == ComponentKind::indicator_set)
                    ? 1 + rng.uniform_int(4)
                    : 1;
      SeparableComponent phi = random_component(rng, kind, dim);
      double alpha = 0.1 + 2.0 * rng.uniform01();
      auto y = random_vec(rng, dim, 2.0);
      std::vector<double> pr(dim), yc(dim), pc(dim);
      phi.prox(y, alpha, pr);
      for (int c = 0; c < dim; ++c) yc[c] = y[c] / alpha;
      phi.prox_conjugate(yc, 1.0 / alpha, pc);
      ++res.cases;
      for (int c = 0; c < dim; ++c) {
        if (std::abs(pr[c] + alpha * pc[c] - y[c]) > 1e-9) {
          res.pass = false;
          res.details = "Moreau identity violated";
          return res;
        }
      }
    }
  }
  return res;
}

CheckResult check_fenchel_young() {
  CheckResult res{"fenchel_young", true, 0, ""};
  Rng rng(303);
  const ComponentKind kinds[] = {ComponentKind::quadratic_plus_indicator,
                                 ComponentKind::elastic_net_scalar,
                                 ComponentKind::neg_utility_boxed};
  for (ComponentKind kind : kinds) {
    for (int n = 0; n < 1000; ++n) {
      int dim = kind == ComponentKind::quadratic_plus_indicator
                    ? 1 + rng.uniform_int(4)
                    : 1;
      SeparableComponent phi = random_component(rng, kind, dim);
      auto u = random_vec(rng, dim, 2.0);
      std::vector<double> xs(dim);
      phi.conjugate_grad(u, xs);
      double fx = phi.value(xs);
      double fstar = phi.conjugate_value(u);
      double ip = dot_span(xs, u);
      ++res.cases;
      if (std::isinf(fx) || std::abs(fx + fstar - ip) > 1e-9) {
        res.pass = false;
        res.details = "Fenchel-Young equality violated at conjugate gradient";
        return res;
      }
    }
  }
  return res;
}

CheckResult check_prox_firm() {
  CheckResult res{"prox_firm_nonexpansive", true, 0, ""};
  Rng rng(404);
  const ComponentKind kinds[] = {ComponentKind::quadratic_plus_indicator,
                                 ComponentKind::elastic_net_scalar,
                                 ComponentKind::neg_utility_boxed,
                                 ComponentKind::indicator_set};
  for (ComponentKind kind : kinds) {
    for (int n = 0; n < 1000; ++n) {
      int dim = (kind == ComponentKind::quadratic_plus_indicator ||
                 kind == ComponentKind::indicator_set)
                    ? 1 + rng.uniform_int(4)
                    : 1;
      SeparableComponent phi = random_component(rng, kind, dim);
      double alpha = 0.1 + 2.0 * rng.uniform01();
      auto y = random_vec(rng, dim, 2.0);
      auto w = random_vec(rng, dim, 2.0);
      std::vector<double> py(dim), pw(dim);
      phi.prox(y, alpha, py);
      phi.prox(w, alpha, pw);
      double lhs = 0.0, rhs = 0.0;
      for (int c = 0; c < dim; ++c) {
        double d = py[c] - pw[c];
        lhs += d * d;
        rhs += d * (y[c] - w[c]);
      }
      ++res.cases;
      if (lhs > rhs + 1e-12) {
        res.pass = false;
        res.details = "firm nonexpansiveness violated";
        return res;
      }
    }
  }
  return res;
}

CheckResult check_projections() {
  CheckResult res{"projection_properties", true, 0, ""};
  Rng rng(505);
  for (int n = 0; n < 1000; ++n) {
    int dim = 1 + rng.uniform_int(5);
    ConvexSet s = random_set(rng, dim);
    auto x = random_vec(rng, dim, 2.0);
    auto z = random_vec(rng, dim, 2.0);
    std::vector<double> px(dim), ppx(dim), pz(dim);
    project_set(s, x, px);
    project_set(s, px, ppx);
    project_set(s, z, pz);
    double idem = 0.0, dxz = 0.0, dpxz = 0.0;
    for (int c = 0; c < dim; ++c) {
      idem += (ppx[c] - px[c]) * (ppx[c] - px[c]);
      dxz += (x[c] - z[c]) * (x[c] - z[c]);
      dpxz += (px[c] - pz[c]) * (px[c] - pz[c]);
    }
    ++res.cases;
    if (std::sqrt(idem) > 1e-12 || std::sqrt(dpxz) > std::sqrt(dxz) + 1e-12) {
      res.pass = false;
      res.details = "projection idempotence/nonexpansiveness violated";
      break;
    }
  }
  return res;
}

double max_dev(const BlockVector& a, const BlockVector& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

CheckResult check_reductions() {
  CheckResult res{"reduction_lattice", true, 0, ""};
  Rng rng(606);
  CompositeProblem p6 = random_problem(rng, 4, 6, 0.6);
  double alpha = 0.5 * safe_pg_alpha(p6);
  const std::uint64_t seed = 777;

  {  // RDCIAG with zero delays vs DBCD, identical seeds
    BlockVector y0 = initial_dual_point(p6);
    SolverState a(p6, y0, alpha, seed, 0), b(p6, y0, alpha, seed, 0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      rdciag_step(p6, a, DelaySchedule::zero());
      random_dbcd_step(p6, b);
      worst = std::max(worst, max_dev(a.y, b.y));
    }
    ++res.cases;
    if (worst > 1e-12) {
      res.pass = false;
      res.details = "rdciag(tau=0) != dbcd, dev " + std::to_string(worst);
      return res;
    }
  }
  {  // single dual block: RDCIAG(tau=0) and PIAG vs dual PG
    CompositeProblem p1 = random_problem(rng, 3, 1, 1.0);
    double a1 = 0.5 * safe_pg_alpha(p1);
    BlockVector y0 = initial_dual_point(p1);
    SolverState a(p1, y0, a1, seed, 0);
    SolverState c(p1, y0, a1, seed, 0);
    BlockVector y = y0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      rdciag_step(p1, a, DelaySchedule::zero());
      piag_step(p1, c, DelaySchedule::zero());
      y = dual_pg_step(p1, y, a1);
      worst = std::max({worst, max_dev(a.y, y), max_dev(c.y, y)});
    }
    ++res.cases;
    if (worst > 1e-12) {
      res.pass = false;
      res.details = "|J|=1 reductions to dual PG failed, dev " +
                    std::to_string(worst);
      return res;
    }
  }
  {  // PIAG with zero delays vs dual PG on the 6-block instance
    BlockVector y0 = initial_dual_point(p6);
    SolverState c(p6, y0, alpha, seed, 0);
    BlockVector y = y0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      piag_step(p6, c, DelaySchedule::zero());
      y = dual_pg_step(p6, y, alpha);
      worst = std::max(worst, max_dev(c.y, y));
    }
    ++res.cases;
    if (worst > 1e-12) {
      res.pass = false;
      res.details = "piag(tau=0) != dual_pg, dev " + std::to_string(worst);
      return res;
    }
  }
  return res;
}

CheckResult check_lipschitz(long pairs) {
  CheckResult res{"lipschitz_domination", true, 0, ""};
  BuiltInstance insts[3];
  insts[0].problem = build_best_approximation(desk_best_approx());
  insts[1].problem = build_augmented_l1(desk_aug_l1());
  insts[2].problem = build_num(desk_num());
  Rng rng(707);
  for (auto& inst : insts) {
    const CompositeProblem& p = inst.problem;
    auto ell = lipschitz_constants(p);
    for (long n = 0; n < pairs; ++n) {
      BlockVector y(p.layout_J()), z(p.layout_J());
      for (double& c : y.data) c = 2.0 * rng.normal();
      for (double& c : z.data) c = 2.0 * rng.normal();
      BlockVector uy = adjoint_apply(p.A, y);
      BlockVector uz = adjoint_apply(p.A, z);
      double dy2 = dist2(y, z);
      ++res.cases;
      for (int i = 0; i < p.nI(); ++i) {
        auto ui = uy.block(i);
        auto vi = uz.block(i);
        std::vector<double> nu(ui.size()), nv(vi.size());
        for (size_t c = 0; c < ui.size(); ++c) {
          nu[c] = -ui[c];
          nv[c] = -vi[c];
        }
        std::vector<double> xi(ui.size()), zi(vi.size());
        p.f[i].conjugate_grad(nu, xi);
        p.f[i].conjugate_grad(nv, zi);
        std::vector<double> dx(ui.size());
        for (size_t c = 0; c < ui.size(); ++c) dx[c] = xi[c] - zi[c];
        double g2 = 0.0;  // || grad h_i(y) - grad h_i(z) ||^2
        for (int idx : p.A.col_entries(i)) {
          const auto& e = p.A.entries()[idx];
          std::vector<double> gj(e.m.rows, 0.0);
          e.m.apply_add(dx, gj);
          for (double c : gj) g2 += c * c;
        }
        if (g2 > ell[i] * ell[i] * dy2 * (1.0 + 1e-9)) {
          res.pass = false;
          res.details = "sampled Lipschitz ratio exceeds ell_i";
          return res;
        }
      }
    }
  }
  return res;
}

CheckResult check_z0() {
  CheckResult res{"z0_solver", true, 0, ""};
  double root = solve_z0(1, 0.5, 1.0);
  ++res.cases;
  if (std::abs(root - std::sqrt(2.0)) > 1e-10) {
    res.pass = false;
    res.details = "tau=1 beta=0.5 gamma=1 root != sqrt(2)";
    return res;
  }
  ++res.cases;
  if (!std::isinf(solve_z0(0, 0.5, 1.0))) {
    res.pass = false;
    res.details = "tau=0 must return the +inf sentinel";
    return res;
  }
  Rng rng(808);
  for (int n = 0; n < 200; ++n) {
    int tau = 1 + rng.uniform_int(8);
    double beta = rng.uniform01() * 0.95;
    double gamma = 0.01 + 2.0 * rng.uniform01();
    double z = solve_z0(tau, beta, gamma);
    double lhs = std::pow((1.0 + z) / (1.0 + beta * z), tau);
    double rhs = 1.0 + gamma / (1.0 + z);
    ++res.cases;
    if (!(z > 0.0) || std::abs(lhs - rhs) > 1e-12) {
      res.pass = false;
      res.details = "z0 residual above 1e-12";
      return res;
    }
  }
  // z0 shrinks as tau grows
  double prev = solve_z0(1, 0.5, 1.0);
  for (int tau : {2, 4, 8}) {
    double z = solve_z0(tau, 0.5, 1.0);
    ++res.cases;
    if (z >= prev) {
      res.pass = false;
      res.details = "z0 not decreasing in tau";
      return res;
    }
    prev = z;
  }
  return res;
}

CheckResult check_descent_suite(long steps) {
  CheckResult res{"descent_inequality", true, 0, ""};
  struct Case {
    CompositeProblem p;
    DelaySchedule sched;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({build_best_approximation(desk_best_approx()),
                   DelaySchedule::random_bounded(1, 99), "best_approx"});
  cases.push_back({build_augmented_l1(desk_aug_l1()),
                   DelaySchedule::random_bounded(1, 99), "aug_l1"});
  cases.push_back({build_num(desk_num()), DelaySchedule::cyclic(2), "num"});
  for (auto& c : cases) {
    ProblemConstants pc = compute_constants(c.p, c.sched.tau_max, 0.0);
    double alpha = pc.alpha_max;  // 1/(4(eta1+eta2)) when sigma is unknown
    ReferenceSolution ref = compute_reference(c.p, 100000);
    DescentReport r =
        run_descent_check(c.p, c.sched, alpha, 4242, steps, &ref);
    res.cases += r.checked;
    if (r.violations > 0) {
      res.pass = false;
      std::ostringstream o;
      o << c.name << ": " << r.violations << " violations, max "
        << r.max_violation;
      res.details = o.str();
      return res;
    }
  }
  return res;
}

CheckResult check_tail_synthetic() {
  CheckResult res{"tail_recurrence_synthetic", true, 0, ""};
  Rng rng(909);
  for (int n = 0; n < 1000; ++n) {
    double a = 0.3 + 0.65 * rng.uniform01();
    int k0 = rng.uniform_int(6);
    double c = 0.01 + rng.uniform01();
    double cond = (c / (1.0 - a)) * (1.0 - std::pow(a, k0 + 1)) /
                  std::pow(a, k0);
    double b = cond * (1.0 + rng.uniform01());
    const int len = 60;
    std::vector<double> V(len), w(len, 0.0);
    V[0] = 0.5 + 1.5 * rng.uniform01();
    for (int k = 0; k + 1 < len; ++k) {
      w[k] = rng.uniform01() * V[k] * (1.0 - a) / (4.0 * b + 1.0);
      double tail = 0.0;
      for (int s = std::max(0, k - k0); s <= k; ++s) tail += w[s];
      V[k + 1] = a * V[k] - b * w[k] + c * tail;
    }
    TailReport rep = check_tail_recurrence(V, w, a, b, c, k0);
    ++res.cases;
    if (!rep.hypothesis_ok || !rep.condition_ok || !rep.conclusion_ok) {
      res.pass = false;
      res.details = "clause failed on a synthetic valid instance";
      return res;
    }
  }
  return res;
}

}  // namespace

std::vector<CheckResult> run_all(const std::string& filter) {
  std::vector<CheckResult> out;
  auto want = [&](const char* name) {
    return filter.empty() || std::string(name).find(filter) != std::string::npos;
  };
  if (want("adjoint_identity")) out.push_back(check_adjoint_identity());
  if (want("moreau_identity")) out.push_back(check_moreau());
  if (want("fenchel_young")) out.push_back(check_fenchel_young());
  if (want("prox_firm_nonexpansive")) out.push_back(check_prox_firm());
  if (want("projection_properties")) out.push_back(check_projections());
  if (want("reduction_lattice")) out.push_back(check_reductions());
  if (want("lipschitz_domination")) out.push_back(check_lipschitz(10000));
  if (want("z0_solver")) out.push_back(check_z0());
  if (want("descent_inequality")) out.push_back(check_descent_suite(1000));
  if (want("tail_recurrence_synthetic")) out.push_back(check_tail_synthetic());
  return out;
}

}  // namespace rdciag::checks
