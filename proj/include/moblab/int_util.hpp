#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>

#include <gmpxx.h>

#include "moblab/errors.hpp"

namespace moblab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

// b^e mod m, m < 2^63.
inline u64 powmod(u64 b, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Largest integer <= num/den (den > 0), exact.
inline i64 floor_div(i64 num, i64 den) {
    i64 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

inline mpz_class floor_mpq(const mpq_class& v) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return q;
}

inline i64 to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw ResourceError("integer exceeds 64-bit range: " + z.get_str());
    return z.get_si();
}

// Half-open integer interval (lo, hi], i.e. n runs over lo+1 .. hi.
struct IntRange {
    i64 lo = 0;  // exclusive
    i64 hi = 0;  // inclusive
    i64 count() const { return hi > lo ? hi - lo : 0; }
    bool contains(i64 n) const { return n > lo && n <= hi; }
};

// Integers n with a < n <= b for exact rational endpoints.
inline IntRange int_range(const mpq_class& a, const mpq_class& b) {
    IntRange r;
    r.lo = to_i64(floor_mpq(a));
    r.hi = to_i64(floor_mpq(b));
    return r;
}

// Integers n with x < n <= x+y, endpoints treated as exact rationals.
inline IntRange interval_range(double x, double y) {
    mpq_class a(x);
    mpq_class b = a + mpq_class(y);
    return int_range(a, b);
}

// Integers m with x/d < m <= (x+y)/d, exact.
inline IntRange interval_range_div(double x, double y, i64 d) {
    mpq_class a(x);
    mpq_class b = a + mpq_class(y);
    return int_range(a / d, b / d);
}

// Exact binomial coefficient.
inline mpz_class binomial(unsigned n, unsigned k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace moblab
