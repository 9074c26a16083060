#pragma once

#include <string>
#include <vector>

#include "rdciag/block_operator.hpp"
#include "rdciag/convex.hpp"

namespace rdciag {

// min_x sum_i f_i(x_i) + sum_j g_j((A x)_j); every f_i strongly convex.
struct CompositeProblem {
  std::vector<SeparableComponent> f;  // over I (column blocks of A)
  std::vector<SeparableComponent> g;  // over J (row blocks of A)
  BlockOperator A;

  const LayoutPtr& layout_I() const { return A.col_layout(); }
  const LayoutPtr& layout_J() const { return A.row_layout(); }
  int nI() const { return static_cast<int>(f.size()); }
  int nJ() const { return static_cast<int>(g.size()); }

  void validate() const;  // layouts vs component dims, mu_i > 0
};

double primal_value(const CompositeProblem& p, const BlockVector& x);
double dual_value(const CompositeProblem& p, const BlockVector& y);
// F(x) + D(y) >= 0, zero exactly at a KKT pair.
double duality_gap(const CompositeProblem& p, const BlockVector& x,
                   const BlockVector& y);

// x = grad f*(-A* y), blockwise.
BlockVector recover_primal(const CompositeProblem& p, const BlockVector& y);

// l_i = sqrt((sum_j ||A_ji||^2 / mu_i^2) |J| max_j ||A_ji||^2)
std::vector<double> lipschitz_constants(const CompositeProblem& p);

// Positive root of ((1+z)/(1+beta z))^tau = 1 + gamma/(1+z); +inf for tau = 0.
double solve_z0(int tau, double beta, double gamma);

struct ProblemConstants {
  std::vector<double> ell;
  double ell_max = 0.0;
  double eta1 = 0.0;     // (|J|-1) sum_i l_i / |J|
  double eta2 = 0.0;     // l_max |I| (tau+1) / 2
  int tau = 0;
  double beta = 0.0;     // 1 - 1/|J|
  double gamma = 0.0;    // (eta2/|J|) sigma (1-beta) / 8
  double z0 = kInf;
  double sigma = 0.0;
  double alpha_max = 0.0;
  double alpha = 0.0;    // the step actually used
  double rate = 1.0;     // 1 - alpha sigma / (|J| (1 + alpha sigma)) at alpha
};

// alpha <= 0 selects alpha_max.
ProblemConstants compute_constants(const CompositeProblem& p, int tau,
                                   double sigma, double alpha = -1.0);

double convergence_rate(double alpha, double sigma, int num_blocks_J);

// A converged (x, y, D*) pair used as the computable stand-in for the dual
// solution set: distances are measured to y_star.
struct ReferenceSolution {
  BlockVector x_star;
  BlockVector y_star;
  double d_star = 0.0;
  std::string provenance;
};

void save_reference(const ReferenceSolution& ref, const std::string& path);
// Validates F(x*) + D(y*) <= 1e-8 against p.
ReferenceSolution load_reference(const std::string& path,
                                 const CompositeProblem& p);

}  // namespace rdciag
