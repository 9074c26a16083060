#include "rdciag/block_operator.hpp"

#include <algorithm>
#include <cmath>

#include "rdciag/kernels.hpp"

namespace rdciag {

void BlockOperator::set_entry(int j, int i, Matrix m) {
  if (j < 0 || j >= rows_->blocks() || i < 0 || i >= cols_->blocks())
    throw DimensionError("set_entry: block index out of range");
  if (m.rows != rows_->dim(j) || m.cols != cols_->dim(i))
    throw DimensionError("set_entry: matrix shape does not match block dims");
  double nrm = spectral_norm(m);
  for (int idx : by_row_[j]) {
    if (entries_[idx].i == i) {
      entries_[idx].m = std::move(m);
      entries_[idx].norm = nrm;
      return;
    }
  }
  int idx = static_cast<int>(entries_.size());
  entries_.push_back(Entry{j, i, std::move(m), nrm});
  by_row_[j].insert(
      std::upper_bound(by_row_[j].begin(), by_row_[j].end(), idx,
                       [&](int, int b) { return i < entries_[b].i; }),
      idx);
  by_col_[i].insert(
      std::upper_bound(by_col_[i].begin(), by_col_[i].end(), idx,
                       [&](int, int b) { return j < entries_[b].j; }),
      idx);
}

const Matrix* BlockOperator::entry(int j, int i) const {
  for (int idx : by_row_[j])
    if (entries_[idx].i == i) return &entries_[idx].m;
  return nullptr;
}

double BlockOperator::entry_norm(int j, int i) const {
  for (int idx : by_row_[j])
    if (entries_[idx].i == i) return entries_[idx].norm;
  return 0.0;
}

double BlockOperator::max_column_norm2() const {
  double best = 0.0;
  for (int i = 0; i < cols_->blocks(); ++i) {
    double s = 0.0;
    for (int idx : by_col_[i]) s += entries_[idx].norm * entries_[idx].norm;
    best = std::max(best, s);
  }
  return best;
}

BlockVector apply(const BlockOperator& a, const BlockVector& x) {
  check_layout(x, a.col_layout(), "apply");
  BlockVector y(a.row_layout());
  kernels::apply_into(a, x, y);
  return y;
}

BlockVector adjoint_apply(const BlockOperator& a, const BlockVector& y) {
  check_layout(y, a.row_layout(), "adjoint_apply");
  BlockVector x(a.col_layout());
  kernels::adjoint_into(a, y, x);
  return x;
}

double operator_norm(const BlockOperator& a) {
  const int n = a.col_layout()->total();
  if (n == 0) return 0.0;
  BlockVector v(a.col_layout());
  double init = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& c : v.data) c = init;

  double est = 0.0;
  for (int it = 0; it < 200; ++it) {
    BlockVector av = apply(a, v);
    BlockVector w = adjoint_apply(a, av);
    double wn = std::sqrt(norm2(w));
    if (wn == 0.0) return 0.0;
    double next = std::sqrt(wn);
    for (size_t c = 0; c < v.data.size(); ++c) v.data[c] = w.data[c] / wn;
    if (it > 0 && std::abs(next - est) <= 1e-12 * next) return next;
    est = next;
  }
  return est;
}

}  // namespace rdciag
