#pragma once

#include <string>

#include "rdciag/solvers.hpp"

namespace rdciag {

// CSV with header exactly `k,D,gap,dist2,gamma,primal_err2,max_age,seconds`,
// 17 significant digits; NaN fields (no reference) are written empty.
void write_trace_csv(const Trace& trace, const std::string& path);
Trace read_trace_csv(const std::string& path);

}  // namespace rdciag
