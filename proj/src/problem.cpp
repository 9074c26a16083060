#include "rdciag/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rdciag/kernels.hpp"

namespace rdciag {

void CompositeProblem::validate() const {
  if (static_cast<int>(f.size()) != A.col_layout()->blocks())
    throw DimensionError("problem: |f| does not match column blocks");
  if (static_cast<int>(g.size()) != A.row_layout()->blocks())
    throw DimensionError("problem: |g| does not match row blocks");
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i].dim() != A.col_layout()->dim(static_cast<int>(i)))
      throw DimensionError("problem: f dimension mismatch");
    if (f[i].mu() <= 0.0)
      throw UnsupportedComponentError("problem: every f_i needs mu > 0");
  }
  for (size_t j = 0; j < g.size(); ++j)
    if (g[j].dim() != A.row_layout()->dim(static_cast<int>(j)))
      throw DimensionError("problem: g dimension mismatch");
}

double primal_value(const CompositeProblem& p, const BlockVector& x) {
  check_layout(x, p.layout_I(), "primal_value");
  BlockVector ax = apply(p.A, x);
  double s = 0.0;
  for (int i = 0; i < p.nI(); ++i) s += p.f[i].value(x.block(i));
  for (int j = 0; j < p.nJ(); ++j) s += p.g[j].value(ax.block(j));
  return s;
}

double dual_value(const CompositeProblem& p, const BlockVector& y) {
  check_layout(y, p.layout_J(), "dual_value");
  BlockVector u = adjoint_apply(p.A, y);
  std::vector<double> terms;
  kernels::dual_terms_into(p, y, u, terms);
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double duality_gap(const CompositeProblem& p, const BlockVector& x,
                   const BlockVector& y) {
  return primal_value(p, x) + dual_value(p, y);
}

BlockVector recover_primal(const CompositeProblem& p, const BlockVector& y) {
  BlockVector u = adjoint_apply(p.A, y);
  BlockVector x(p.layout_I());
  kernels::conjugate_grads_into(p, u, x);
  return x;
}

std::vector<double> lipschitz_constants(const CompositeProblem& p) {
  const int nI = p.nI();
  const int nJ = p.nJ();
  std::vector<double> ell(nI, 0.0);
  for (int i = 0; i < nI; ++i) {
    double mu = p.f[i].mu();
    if (mu <= 0.0)
      throw UnsupportedComponentError("lipschitz_constants: mu_i = 0");
    double sum = 0.0, mx = 0.0;
    for (int idx : p.A.col_entries(i)) {
      double n = p.A.entries()[idx].norm;
      sum += n * n;
      mx = std::max(mx, n * n);
    }
    ell[i] = std::sqrt(sum / (mu * mu) * static_cast<double>(nJ) * mx);
  }
  return ell;
}

double solve_z0(int tau, double beta, double gamma) {
  if (tau == 0) return kInf;  // lhs is identically 1 < 1 + gamma/(1+z)
  auto lhs = [&](double z) {
    return std::pow((1.0 + z) / (1.0 + beta * z), tau);
  };
  auto rhs = [&](double z) { return 1.0 + gamma / (1.0 + z); };

  double hi = 1.0;
  while (lhs(hi) <= rhs(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return kInf;  // beta = 1 never crosses
  }
  double lo = 1e-12;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double r = lhs(mid) - rhs(mid);
    if (std::abs(r) <= 1e-13) return mid;
    if (r < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double convergence_rate(double alpha, double sigma, int num_blocks_J) {
  double as = alpha * sigma;
  return 1.0 - as / (static_cast<double>(num_blocks_J) * (1.0 + as));
}

ProblemConstants compute_constants(const CompositeProblem& p, int tau,
                                   double sigma, double alpha) {
  ProblemConstants c;
  c.ell = lipschitz_constants(p);
  double sum = 0.0;
  for (double l : c.ell) {
    sum += l;
    c.ell_max = std::max(c.ell_max, l);
  }
  const double nJ = static_cast<double>(p.nJ());
  c.tau = tau;
  c.eta1 = (nJ - 1.0) * sum / nJ;
  c.eta2 = c.ell_max * static_cast<double>(p.nI()) * (tau + 1) / 2.0;
  c.beta = 1.0 - 1.0 / nJ;
  c.sigma = sigma;
  c.gamma = (c.eta2 / nJ) * sigma * (1.0 - c.beta) / 8.0;
  c.z0 = solve_z0(tau, c.beta, c.gamma);

  double am = std::min(c.eta2 / (8.0 * nJ), 1.0 / (4.0 * (c.eta1 + c.eta2)));
  if (sigma > 0.0 && std::isfinite(c.z0)) am = std::min(am, c.z0 / sigma);
  c.alpha_max = am;
  c.alpha = (alpha > 0.0) ? alpha : am;
  c.rate = convergence_rate(c.alpha, sigma, p.nJ());
  return c;
}

void save_reference(const ReferenceSolution& ref, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_reference: cannot open " + path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", ref.d_star);
  out << "D_star " << buf << "\n";
  if (!ref.provenance.empty()) out << "# " << ref.provenance << "\n";
  for (int i = 0; i < ref.x_star.blocks(); ++i) {
    out << "x " << i;
    for (double v : ref.x_star.block(i)) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << " " << buf;
    }
    out << "\n";
  }
  for (int j = 0; j < ref.y_star.blocks(); ++j) {
    out << "y " << j;
    for (double v : ref.y_star.block(j)) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << " " << buf;
    }
    out << "\n";
  }
}

ReferenceSolution load_reference(const std::string& path,
                                 const CompositeProblem& p) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_reference: cannot open " + path);
  ReferenceSolution ref;
  ref.x_star = BlockVector(p.layout_I());
  ref.y_star = BlockVector(p.layout_J());
  ref.provenance = path;
  bool have_d = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "D_star") {
      ss >> ref.d_star;
      have_d = true;
    } else if (tag == "x" || tag == "y") {
      int b = -1;
      ss >> b;
      BlockVector& target = (tag == "x") ? ref.x_star : ref.y_star;
      if (b < 0 || b >= target.blocks())
        throw std::runtime_error("load_reference: bad block index in " + path);
      auto blk = target.block(b);
      for (size_t c = 0; c < blk.size(); ++c) {
        if (!(ss >> blk[c]))
          throw std::runtime_error("load_reference: short block line in " +
                                   path);
      }
    } else {
      throw std::runtime_error("load_reference: unknown tag '" + tag + "'");
    }
  }
  if (!have_d) throw std::runtime_error("load_reference: missing D_star line");
  double gap = duality_gap(p, ref.x_star, ref.y_star);
  if (!(gap <= 1e-8))
    throw std::runtime_error("load_reference: stored pair has duality gap " +
                             std::to_string(gap) + " > 1e-8");
  return ref;
}

}  // namespace rdciag
