#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdciag/errors.hpp"

namespace rdciag {

// Dimensions of a Cartesian product of Euclidean blocks.
class BlockLayout {
 public:
  explicit BlockLayout(std::vector<int> dims) : dims_(std::move(dims)) {
    offsets_.reserve(dims_.size() + 1);
    int off = 0;
    for (int d : dims_) {
      if (d < 1) throw DimensionError("block dimension must be >= 1");
      offsets_.push_back(off);
      off += d;
    }
    offsets_.push_back(off);
    total_ = off;
  }

  int blocks() const { return static_cast<int>(dims_.size()); }
  int dim(int b) const { return dims_[b]; }
  int offset(int b) const { return offsets_[b]; }
  int total() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  bool same_as(const BlockLayout& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

using LayoutPtr = std::shared_ptr<const BlockLayout>;

inline LayoutPtr make_layout(std::vector<int> dims) {
  return std::make_shared<const BlockLayout>(std::move(dims));
}

// An element of a block product space, stored flat in block order.
struct BlockVector {
  LayoutPtr layout;
  std::vector<double> data;

  BlockVector() = default;
  explicit BlockVector(LayoutPtr l)
      : layout(std::move(l)), data(layout->total(), 0.0) {}

  std::span<double> block(int b) {
    return {data.data() + layout->offset(b), static_cast<size_t>(layout->dim(b))};
  }
  std::span<const double> block(int b) const {
    return {data.data() + layout->offset(b), static_cast<size_t>(layout->dim(b))};
  }
  int blocks() const { return layout->blocks(); }
  int total() const { return layout->total(); }
};

inline void check_layout(const BlockVector& v, const LayoutPtr& expected,
                         const char* where) {
  if (!v.layout || !v.layout->same_as(*expected))
    throw DimensionError(std::string(where) + ": block layout mismatch");
}

inline double dot(const BlockVector& a, const BlockVector& b) {
  if (a.data.size() != b.data.size())
    throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

inline double norm2(const BlockVector& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return s;
}

inline double norm(const BlockVector& a) { return std::sqrt(norm2(a)); }

inline double dist2(const BlockVector& a, const BlockVector& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return s;
}

// a += t * b
inline void axpy(double t, const BlockVector& b, BlockVector& a) {
  for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += t * b.data[i];
}

inline double dot_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_span(std::span<const double> a) {
  return std::sqrt(dot_span(a, a));
}

// Places v at block q of a fresh zero vector.
BlockVector embed_block(const LayoutPtr& layout, int q,
                        std::span<const double> v);

}  // namespace rdciag
