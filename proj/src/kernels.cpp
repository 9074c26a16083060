#include "rdciag/kernels.hpp"

#include <algorithm>

#include "rdciag/parallel.hpp"

namespace rdciag::kernels {

// Each parallel loop below assigns whole output blocks (or slots) to single
// iterations; inner sums run in fixed index order. That keeps results
// bitwise independent of the thread count.

void apply_into(const BlockOperator& a, const BlockVector& x, BlockVector& y) {
  const int nj = a.row_layout()->blocks();
  std::fill(y.data.begin(), y.data.end(), 0.0);
#pragma omp parallel for schedule(static) if (nj > 8)
  for (int j = 0; j < nj; ++j) {
    auto yj = y.block(j);
    for (int idx : a.row_entries(j)) {
      const auto& e = a.entries()[idx];
      e.m.apply_add(x.block(e.i), yj);
    }
  }
}

void adjoint_into(const BlockOperator& a, const BlockVector& y, BlockVector& x) {
  const int ni = a.col_layout()->blocks();
  std::fill(x.data.begin(), x.data.end(), 0.0);
#pragma omp parallel for schedule(static) if (ni > 8)
  for (int i = 0; i < ni; ++i) {
    auto xi = x.block(i);
    for (int idx : a.col_entries(i)) {
      const auto& e = a.entries()[idx];
      e.m.apply_transpose_add(y.block(e.j), xi);
    }
  }
}

void conjugate_grads_into(const CompositeProblem& p, const BlockVector& u,
                          BlockVector& x) {
  const int ni = p.nI();
#pragma omp parallel for schedule(static) if (ni > 8)
  for (int i = 0; i < ni; ++i) {
    auto ui = u.block(i);
    std::vector<double> neg(ui.size());
    for (size_t c = 0; c < ui.size(); ++c) neg[c] = -ui[c];
    p.f[i].conjugate_grad(neg, x.block(i));
  }
}

void candidate_into(const CompositeProblem& p, const BlockVector& y,
                    const BlockVector& s, double alpha, BlockVector& out) {
  const int nj = p.nJ();
#pragma omp parallel for schedule(static) if (nj > 8)
  for (int j = 0; j < nj; ++j) {
    auto yj = y.block(j);
    auto sj = s.block(j);
    std::vector<double> w(yj.size());
    for (size_t c = 0; c < yj.size(); ++c) w[c] = yj[c] + alpha * sj[c];
    p.g[j].prox_conjugate(w, alpha, out.block(j));
  }
}

void dual_terms_into(const CompositeProblem& p, const BlockVector& y,
                     const BlockVector& u, std::vector<double>& terms) {
  const int ni = p.nI();
  const int nj = p.nJ();
  terms.resize(static_cast<size_t>(ni) + nj);
#pragma omp parallel for schedule(static) if (ni + nj > 16)
  for (int t = 0; t < ni + nj; ++t) {
    if (t < ni) {
      auto ui = u.block(t);
      std::vector<double> neg(ui.size());
      for (size_t c = 0; c < ui.size(); ++c) neg[c] = -ui[c];
      terms[t] = p.f[t].conjugate_value(neg);
    } else {
      int j = t - ni;
      terms[t] = p.g[j].conjugate_value(y.block(j));
    }
  }
}

namespace serial {

void apply_into(const BlockOperator& a, const BlockVector& x, BlockVector& y) {
  std::fill(y.data.begin(), y.data.end(), 0.0);
  for (int j = 0; j < a.row_layout()->blocks(); ++j) {
    auto yj = y.block(j);
    for (int idx : a.row_entries(j)) {
      const auto& e = a.entries()[idx];
      e.m.apply_add(x.block(e.i), yj);
    }
  }
}

void adjoint_into(const BlockOperator& a, const BlockVector& y, BlockVector& x) {
  std::fill(x.data.begin(), x.data.end(), 0.0);
  for (int i = 0; i < a.col_layout()->blocks(); ++i) {
    auto xi = x.block(i);
    for (int idx : a.col_entries(i)) {
      const auto& e = a.entries()[idx];
      e.m.apply_transpose_add(y.block(e.j), xi);
    }
  }
}

void conjugate_grads_into(const CompositeProblem& p, const BlockVector& u,
                          BlockVector& x) {
  std::vector<double> neg;
  for (int i = 0; i < p.nI(); ++i) {
    auto ui = u.block(i);
    neg.assign(ui.begin(), ui.end());
    for (double& c : neg) c = -c;
    p.f[i].conjugate_grad(neg, x.block(i));
  }
}

void candidate_into(const CompositeProblem& p, const BlockVector& y,
                    const BlockVector& s, double alpha, BlockVector& out) {
  std::vector<double> w;
  for (int j = 0; j < p.nJ(); ++j) {
    auto yj = y.block(j);
    auto sj = s.block(j);
    w.resize(yj.size());
    for (size_t c = 0; c < yj.size(); ++c) w[c] = yj[c] + alpha * sj[c];
    p.g[j].prox_conjugate(w, alpha, out.block(j));
  }
}

void dual_terms_into(const CompositeProblem& p, const BlockVector& y,
                     const BlockVector& u, std::vector<double>& terms) {
  const int ni = p.nI();
  const int nj = p.nJ();
  terms.resize(static_cast<size_t>(ni) + nj);
  std::vector<double> neg;
  for (int i = 0; i < ni; ++i) {
    auto ui = u.block(i);
    neg.assign(ui.begin(), ui.end());
    for (double& c : neg) c = -c;
    terms[i] = p.f[i].conjugate_value(neg);
  }
  for (int j = 0; j < nj; ++j)
    terms[static_cast<size_t>(ni) + j] = p.g[j].conjugate_value(y.block(j));
}

}  // namespace serial

}  // namespace rdciag::kernels
