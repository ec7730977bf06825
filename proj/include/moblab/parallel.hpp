#pragma once

#include <functional>

#include "moblab/int_util.hpp"

namespace moblab {

// Worker count used by parallel loops; 0 restores the hardware default.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for every i in [0, n). Each index is handled by exactly one
// worker; callers keep determinism by writing results into slot i and
// reducing in index order afterwards.
void parallel_for_index(i64 n, const std::function<void(i64)>& fn);

}  // namespace moblab
