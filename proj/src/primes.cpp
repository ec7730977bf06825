#include "moblab/primes.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

#include "moblab/errors.hpp"

namespace moblab {

namespace {

std::mutex g_mutex;
std::shared_ptr<const std::vector<u64>> g_primes;  // sorted, covers [2, g_limit]
u64 g_limit = 0;

std::vector<u64> simple_sieve(u64 limit) {
    std::vector<char> mark(limit + 1, 1);
    std::vector<u64> primes;
    for (u64 i = 2; i <= limit; ++i) {
        if (!mark[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) mark[j] = 0;
        if (i > limit / i) {
            for (u64 j = i + 1; j <= limit; ++j)
                if (mark[j]) primes.push_back(j);
            break;
        }
    }
    return primes;
}

}  // namespace

std::shared_ptr<const std::vector<u64>> ensure_primes(u64 limit) {
    if (limit > (u64(1) << 31))
        throw ResourceError("prime cache limit too large: " + std::to_string(limit));
    std::lock_guard<std::mutex> lock(g_mutex);
    if (!g_primes || limit > g_limit) {
        u64 target = std::max<u64>({limit, 2 * g_limit, 1u << 16});
        g_primes = std::make_shared<const std::vector<u64>>(simple_sieve(target));
        g_limit = target;
    }
    return g_primes;
}

std::vector<PrimePower> factorize(u64 n) {
    std::vector<PrimePower> out;
    if (n <= 1) return out;
    auto primes = ensure_primes(isqrt_u64(n) + 1);
    for (u64 p : *primes) {
        if (p * p > n) break;
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> out{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t m = out.size();
        u64 pk = 1;
        for (unsigned j = 1; j <= e; ++j) {
            pk *= p;
            for (size_t i = 0; i < m; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

u64 euler_phi(u64 n) {
    u64 r = n;
    for (const auto& [p, e] : factorize(n)) r -= r / p;
    return n == 0 ? 0 : r;
}

int mobius(u64 n) {
    if (n == 0) return 0;
    int sign = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e >= 2) return 0;
        sign = -sign;
    }
    return sign;
}

u64 tau(u64 n) {
    u64 r = 1;
    for (const auto& [p, e] : factorize(n)) r *= e + 1;
    return r;
}

unsigned omega(u64 n) { return static_cast<unsigned>(factorize(n).size()); }

}  // namespace moblab
