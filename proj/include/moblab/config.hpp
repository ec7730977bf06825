#pragma once

#include <string>

#include "moblab/int_util.hpp"

namespace moblab {

struct GlobalConfig {
    long prec_bits = 0;  // 0: derive from (k, x+y) via the precision contract
    i64 budget_terms = 1'000'000'000;
    double c1 = -1.0;  // <= 0: default 8(k+1)
    double eps = 0.01;
    int threads = 0;  // 0: hardware concurrency

    long bits_for(int k, double n_max) const;
};

// Reads a JSON config file (empty path skips) and then applies the
// MOBLAB_THREADS / MOBLAB_PREC_BITS environment overrides.
GlobalConfig load_config(const std::string& path);

}  // namespace moblab
