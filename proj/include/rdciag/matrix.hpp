#pragma once

#include <span>
#include <vector>

namespace rdciag {

// Small dense row-major matrix, the payload of one operator block.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  // y += M x
  void apply_add(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      const double* row = a.data() + static_cast<size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) s += row[c] * x[c];
      y[r] += s;
    }
  }

  // x += M^T y
  void apply_transpose_add(std::span<const double> y, std::span<double> x) const {
    for (int r = 0; r < rows; ++r) {
      const double* row = a.data() + static_cast<size_t>(r) * cols;
      double yr = y[r];
      for (int c = 0; c < cols; ++c) x[c] += row[c] * yr;
    }
  }

  // y += t * (M x)
  void apply_scaled_add(double t, std::span<const double> x,
                        std::span<double> y) const {
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      const double* row = a.data() + static_cast<size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) s += row[c] * x[c];
      y[r] += t * s;
    }
  }
};

// Spectral norm by power iteration on M^T M: normalized all-ones start,
// at most 200 iterations, stop when the Rayleigh estimate changes by less
// than 1e-12 relative. Zero matrix returns 0.
double spectral_norm(const Matrix& m);

}  // namespace rdciag
