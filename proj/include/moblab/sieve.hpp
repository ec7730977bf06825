#pragma once

#include <cstdint>
#include <vector>

#include "moblab/int_util.hpp"

namespace moblab {

enum class ArithFn : unsigned { Mu = 1, Lambda = 2, Tau = 4 };

inline unsigned operator|(ArithFn a, ArithFn b) {
    return static_cast<unsigned>(a) | static_cast<unsigned>(b);
}
inline unsigned operator|(unsigned a, ArithFn b) { return a | static_cast<unsigned>(b); }
inline bool has_fn(unsigned want, ArithFn f) { return want & static_cast<unsigned>(f); }

// mu(n), Lambda(n), tau(n) over the half-open interval (x, x+y], arrays
// indexed by n - x - 1.
struct ArithSegment {
    u64 x = 0;  // exclusive lower endpoint
    u64 y = 0;  // length
    unsigned want = 0;
    std::vector<std::int8_t> mu;
    std::vector<double> lambda_vals;
    std::vector<u64> tau;

    bool covers(u64 lo_excl, u64 hi_incl) const { return x <= lo_excl && lo_excl <= hi_incl && hi_incl <= x + y; }
    int mu_at(u64 n) const { return mu[n - x - 1]; }
    double lambda_at(u64 n) const { return lambda_vals[n - x - 1]; }
    u64 tau_at(u64 n) const { return tau[n - x - 1]; }
};

// Segmented trial-marking with primes <= sqrt(x+y). Cofactors surviving all
// small primes are themselves prime, so no large factorizations happen.
ArithSegment sieve_segment(u64 x, u64 y, unsigned want,
                           u64 max_segment_len = u64(1) << 23);

// Sum of tau(n)^c over (x, x+y], exact integer returned as double.
double divisor_power_sum(u64 x, u64 y, unsigned c);

}  // namespace moblab
