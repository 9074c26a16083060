#pragma once

#include <vector>

#include "rdciag/block_operator.hpp"
#include "rdciag/problem.hpp"

namespace rdciag::kernels {

// OpenMP-parallel block kernels. Every kernel writes each output slot from
// exactly one loop iteration and performs cross-slot reductions serially in
// index order, so results are bitwise identical to the serial reference
// below for any thread count.

void apply_into(const BlockOperator& a, const BlockVector& x, BlockVector& y);
void adjoint_into(const BlockOperator& a, const BlockVector& y, BlockVector& x);
// x_i = grad f_i*(-u_i) for all i
void conjugate_grads_into(const CompositeProblem& p, const BlockVector& u,
                          BlockVector& x);
// out_j = prox_{alpha g_j*}(y_j + alpha s_j) for all j
void candidate_into(const CompositeProblem& p, const BlockVector& y,
                    const BlockVector& s, double alpha, BlockVector& out);
// terms[i] = f_i*(-u_i), terms[|I|+j] = g_j*(y_j); summed serially by callers
void dual_terms_into(const CompositeProblem& p, const BlockVector& y,
                     const BlockVector& u, std::vector<double>& terms);

namespace serial {
// Plain-loop reference implementations kept for testing and benchmarking.
void apply_into(const BlockOperator& a, const BlockVector& x, BlockVector& y);
void adjoint_into(const BlockOperator& a, const BlockVector& y, BlockVector& x);
void conjugate_grads_into(const CompositeProblem& p, const BlockVector& u,
                          BlockVector& x);
void candidate_into(const CompositeProblem& p, const BlockVector& y,
                    const BlockVector& s, double alpha, BlockVector& out);
void dual_terms_into(const CompositeProblem& p, const BlockVector& y,
                     const BlockVector& u, std::vector<double>& terms);
}  // namespace serial

}  // namespace rdciag::kernels
