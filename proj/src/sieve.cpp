#include "moblab/sieve.hpp"

#include <cmath>

#include "moblab/errors.hpp"
#include "moblab/primes.hpp"

namespace moblab {

ArithSegment sieve_segment(u64 x, u64 y, unsigned want, u64 max_segment_len) {
    if (y < 1) throw ArgumentError("segment length must be >= 1");
    if (x > (u64(1) << 62) - y) throw ArgumentError("segment endpoint exceeds integer budget");
    if (y > max_segment_len)
        throw ResourceError("segment length " + std::to_string(y) +
                            " exceeds budget; stream sub-segments");

    ArithSegment seg;
    seg.x = x;
    seg.y = y;
    seg.want = want;

    const size_t n = static_cast<size_t>(y);
    std::vector<u64> rem(n);
    for (size_t i = 0; i < n; ++i) rem[i] = x + 1 + i;

    const bool need_mu = has_fn(want, ArithFn::Mu);
    const bool need_la = has_fn(want, ArithFn::Lambda);
    const bool need_tau = has_fn(want, ArithFn::Tau);
    if (need_mu) seg.mu.assign(n, 1);
    if (need_tau) seg.tau.assign(n, 1);
    std::vector<std::uint8_t> nprimes;
    std::vector<u64> lastp;
    if (need_la) {
        nprimes.assign(n, 0);
        lastp.assign(n, 0);
    }

    const u64 hi = x + y;
    auto primes = ensure_primes(isqrt_u64(hi) + 1);
    for (u64 p : *primes) {
        if (p * p > hi) break;
        u64 m = (x / p + 1) * p;
        for (; m <= hi; m += p) {
            size_t i = static_cast<size_t>(m - x - 1);
            unsigned e = 0;
            while (rem[i] % p == 0) {
                rem[i] /= p;
                ++e;
            }
            if (need_mu) seg.mu[i] = (e >= 2) ? 0 : static_cast<std::int8_t>(-seg.mu[i]);
            if (need_tau) seg.tau[i] *= e + 1;
            if (need_la) {
                nprimes[i] = static_cast<std::uint8_t>(std::min<unsigned>(nprimes[i] + 1, 250));
                lastp[i] = p;
            }
        }
    }
    for (size_t i = 0; i < n; ++i) {
        if (rem[i] > 1) {  // prime cofactor > sqrt(x+y)
            if (need_mu) seg.mu[i] = static_cast<std::int8_t>(-seg.mu[i]);
            if (need_tau) seg.tau[i] *= 2;
            if (need_la) {
                nprimes[i] = static_cast<std::uint8_t>(std::min<unsigned>(nprimes[i] + 1, 250));
                lastp[i] = rem[i];
            }
        }
    }
    if (need_la) {
        seg.lambda_vals.assign(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            if (nprimes[i] == 1) seg.lambda_vals[i] = std::log(static_cast<double>(lastp[i]));
    }
    return seg;
}

double divisor_power_sum(u64 x, u64 y, unsigned c) {
    if (c < 1) throw ArgumentError("exponent c must be >= 1");
    ArithSegment seg = sieve_segment(x, y, static_cast<unsigned>(ArithFn::Tau));
    mpz_class total = 0;
    mpz_class tc;
    for (u64 t : seg.tau) {
        mpz_ui_pow_ui(tc.get_mpz_t(), t, c);
        total += tc;
    }
    return total.get_d();
}

}  // namespace moblab
