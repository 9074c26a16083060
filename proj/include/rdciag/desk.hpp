#pragma once

#include "rdciag/apps.hpp"

namespace rdciag {

// The three desk-scale instances used by the shipped configs, the `check`
// property suite and the acceptance tests. Generation is deterministic.

// n = 5, box constraint set, three halfspaces.
BestApproxSpec desk_best_approx();

// m = 10, n = 30 Gaussian rows, b = A x with a 3-sparse x, lambda = 0.1.
AugL1Spec desk_aug_l1();

// 4 sources with log utilities, 3 links, lambda = 0.1.
NumSpec desk_num();

}  // namespace rdciag
