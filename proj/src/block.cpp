#include "rdciag/block.hpp"

#include <algorithm>

namespace rdciag {

BlockVector embed_block(const LayoutPtr& layout, int q,
                        std::span<const double> v) {
  if (q < 0 || q >= layout->blocks())
    throw DimensionError("embed_block: block index out of range");
  if (static_cast<int>(v.size()) != layout->dim(q))
    throw DimensionError("embed_block: vector length does not match block");
  BlockVector out(layout);
  std::copy(v.begin(), v.end(), out.block(q).begin());
  return out;
}

}  // namespace rdciag
