#pragma once

#include <span>
#include <vector>

#include "rdciag/block.hpp"
#include "rdciag/matrix.hpp"

namespace rdciag {

// Sparse grid {A_ji} of dense blocks mapping the I-side product space to the
// J-side one. Absent entries are zero maps. Per-entry spectral norms are
// cached at insertion. Immutable once handed to a problem.
class BlockOperator {
 public:
  struct Entry {
    int j;  // row block (J side)
    int i;  // column block (I side)
    Matrix m;
    double norm;
  };

  BlockOperator(LayoutPtr row_layout, LayoutPtr col_layout)
      : rows_(std::move(row_layout)),
        cols_(std::move(col_layout)),
        by_row_(rows_->blocks()),
        by_col_(cols_->blocks()) {}

  // Inserts or replaces the (j, i) block; shape must match the layouts.
  void set_entry(int j, int i, Matrix m);

  const Matrix* entry(int j, int i) const;
  double entry_norm(int j, int i) const;

  const std::vector<Entry>& entries() const { return entries_; }
  // Indices into entries(), grouped per row/column block, ascending.
  const std::vector<int>& row_entries(int j) const { return by_row_[j]; }
  const std::vector<int>& col_entries(int i) const { return by_col_[i]; }

  const LayoutPtr& row_layout() const { return rows_; }
  const LayoutPtr& col_layout() const { return cols_; }

  // max over columns i of sum_j ||A_ji||^2 (used by reference step sizing)
  double max_column_norm2() const;

 private:
  LayoutPtr rows_, cols_;
  std::vector<Entry> entries_;
  std::vector<std::vector<int>> by_row_, by_col_;
};

// A x = (sum_i A_ji x_i)_j
BlockVector apply(const BlockOperator& a, const BlockVector& x);

// A* y = (sum_j A_ji^T y_j)_i
BlockVector adjoint_apply(const BlockOperator& a, const BlockVector& y);

// ||A|| by power iteration with apply/adjoint_apply, deterministic start.
double operator_norm(const BlockOperator& a);

}  // namespace rdciag
