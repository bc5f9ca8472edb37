#pragma once

namespace r2f2 {

// Thread cap from R2F2_THREADS (0 or unset = OpenMP default). Applied once
// per process before the first parallel region.
int thread_cap();
void apply_thread_cap();

}  // namespace r2f2
