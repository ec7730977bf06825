#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "moblab/int_util.hpp"
#include "moblab/phase.hpp"
#include "moblab/sieve.hpp"

namespace moblab {

inline constexpr i64 kDefaultTermBudget = 1'000'000'000;

struct ExpSumResult {
    std::complex<double> sum{0.0, 0.0};
    i64 n_terms = 0;
    double max_phase_error = 0.0;  // per-term bound on the frac() error
    double err_bound = 0.0;        // bound on |sum - exact value|
};

// Sum of e(n^k alpha) over x < n <= x+y.
ExpSumResult weyl_sum(double x, double y, int k, const PhaseReal& alpha,
                      i64 budget = kDefaultTermBudget);

// Sum of mu(n) e(n^k alpha); segment must cover (x, x+y] with mu populated.
ExpSumResult mobius_expsum(double x, double y, int k, const PhaseReal& alpha,
                           const ArithSegment& segment, i64 budget = kDefaultTermBudget);

// Sum of weights[n - lo - 1] e(n^k alpha) over the integers of (x, x+y].
ExpSumResult twisted_expsum(double x, double y, int k, const PhaseReal& alpha,
                            std::span<const std::complex<double>> weights,
                            i64 budget = kDefaultTermBudget);

// Sum of weight(n) e(n^k alpha) over an explicit integer range (lo, hi].
ExpSumResult weighted_expsum(i64 lo, i64 hi, int k, const PhaseReal& alpha,
                             const std::function<std::complex<double>(i64)>& weight,
                             i64 budget = kDefaultTermBudget);

// Complete Gauss sum S(q,a) = sum_{1<=x<=q} e(a x^k / q), exact phases.
// Splits multiplicatively over prime powers above crt_threshold.
std::complex<double> gauss_sum(u64 q, i64 a, int k, u64 crt_threshold = 100000);

// S(q,a) for every a; entries with gcd(a,q) > 1 are zero.
std::vector<std::complex<double>> gauss_sum_all(u64 q, int k);

// The multiplicative weight w_k: on p^(ku+v) with 1 <= v <= k it equals
// k p^(-u-1/2) when v = 1 and p^(-u-1) otherwise.
struct WkWeight {
    u64 q;
    int k;
    double value;
};
WkWeight w_k(u64 q, int k);

// w_k(q) y / (1 + y x^{k-1} |alpha - a/q|).
double major_arc_term(u64 q, i64 a, const PhaseReal& alpha, double x, double y, int k);

// R(n,h) = ((n+h)^k - n^k)/h via the binomial expansion, exact.
mpz_class r_poly(const mpz_class& n, const mpz_class& h, int k);

// sum over N < n <= 2N of tau(n)^c w_k(q / gcd(q, n^j)).
double wk_sum_lemma37(u64 N, u64 q, unsigned j, int k, unsigned c);

// sum over N < n <= 2N, gcd(n,h)=1 of tau(n)^c tau(n+h)^c w_k(q / gcd(q, R(n,h))).
double wk_sum_lemma37_pairs(u64 N, u64 q, u64 h, int k, unsigned c);

// max over q <= q_max, gcd(a,q)=1 of |S(q,a)| / (q w_k(q)).
double gauss_ratio_scan(u64 q_max, int k);

}  // namespace moblab
