#pragma once

namespace rdciag::parallel {

// Thread count used by the OpenMP kernels and by concurrent seed sweeps.
// Defaults to the hardware count, capped by the RDCIAG_THREADS environment
// variable when set. 1 forces the serial path.
int num_threads();
void set_num_threads(int n);
void init_from_env();

}  // namespace rdciag::parallel
