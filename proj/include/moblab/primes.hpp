#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "moblab/int_util.hpp"

namespace moblab {

// Shared, growable list of primes. ensure_primes(limit) returns a snapshot
// containing every prime <= limit; snapshots stay valid while the cache grows.
std::shared_ptr<const std::vector<u64>> ensure_primes(u64 limit);

struct PrimePower {
    u64 p;
    unsigned e;
};

// Trial-division factorization using the shared prime cache.
std::vector<PrimePower> factorize(u64 n);

// All divisors of n, ascending.
std::vector<u64> divisors(u64 n);

u64 euler_phi(u64 n);
int mobius(u64 n);
u64 tau(u64 n);
unsigned omega(u64 n);  // number of distinct prime factors

}  // namespace moblab
