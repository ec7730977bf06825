#include "moblab/expsum.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "moblab/errors.hpp"
#include "moblab/parallel.hpp"
#include "moblab/primes.hpp"

namespace moblab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr i64 kBlock = 1 << 15;

// Neumaier compensated accumulator.
struct CompSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::fabs(s) >= std::fabs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double total() const { return s + c; }
};

struct BlockPartial {
    CompSum re, im;
    double abs_w = 0.0;
};

// Compensated block-parallel sum of w(n) e(n^k alpha) over n in (lo, hi].
// Fixed block boundaries keep the result bit-stable across thread counts.
template <typename WeightFn>
ExpSumResult sum_terms(i64 lo, i64 hi, int k, const PhaseReal& alpha, WeightFn weight, i64 budget) {
    ExpSumResult out;
    if (hi <= lo) return out;
    out.n_terms = hi - lo;
    if (out.n_terms > budget)
        throw ResourceError("sum over " + std::to_string(out.n_terms) +
                            " terms exceeds budget " + std::to_string(budget));

    i64 n_blocks = (out.n_terms + kBlock - 1) / kBlock;
    std::vector<BlockPartial> parts(static_cast<size_t>(n_blocks));
    double max_err = 0.0;
    {
        PhaseEval probe(alpha, k, hi);  // validates the precision contract up front
        max_err = probe.max_phase_error();
    }
    parallel_for_index(n_blocks, [&](i64 b) {
        i64 first = lo + 1 + b * kBlock;
        i64 last = std::min<i64>(lo + (b + 1) * kBlock, hi);
        PhaseEval eval(alpha, k, last);
        BlockPartial part;
        for (i64 n = first; n <= last; ++n) {
            std::complex<double> w = weight(n);
            if (w == std::complex<double>(0.0, 0.0)) continue;
            double ph = kTwoPi * eval.frac(n);
            double cs = std::cos(ph), sn = std::sin(ph);
            part.re.add(w.real() * cs - w.imag() * sn);
            part.im.add(w.real() * sn + w.imag() * cs);
            part.abs_w += std::abs(w);
        }
        parts[static_cast<size_t>(b)] = part;
    });
    CompSum re, im;
    double abs_w = 0.0;
    for (const auto& p : parts) {
        re.add(p.re.total());
        im.add(p.im.total());
        abs_w += p.abs_w;
    }
    out.sum = {re.total(), im.total()};
    out.max_phase_error = max_err;
    out.err_bound = abs_w * kTwoPi * max_err +
                    static_cast<double>(out.n_terms) * std::ldexp(1.0, -48);
    return out;
}

double mpq_abs_to_double(const mpq_class& v) { return std::fabs(PhaseReal::mpq_get_d_safe(v)); }

std::vector<std::complex<double>> unit_roots(u64 q) {
    std::vector<std::complex<double>> roots(q);
    for (u64 j = 0; j < q; ++j) {
        double ph = kTwoPi * (static_cast<double>(j) / static_cast<double>(q));
        roots[j] = {std::cos(ph), std::sin(ph)};
    }
    return roots;
}

u64 normalize_mod(i64 a, u64 q) {
    i64 r = a % static_cast<i64>(q);
    if (r < 0) r += static_cast<i64>(q);
    return static_cast<u64>(r);
}

}  // namespace

ExpSumResult weyl_sum(double x, double y, int k, const PhaseReal& alpha, i64 budget) {
    if (!(x >= 0) || !(y >= 0)) throw ArgumentError("need x >= 0 and y >= 0");
    IntRange r = interval_range(x, y);
    return sum_terms(r.lo, r.hi, k, alpha, [](i64) { return std::complex<double>(1.0, 0.0); },
                     budget);
}

ExpSumResult mobius_expsum(double x, double y, int k, const PhaseReal& alpha,
                           const ArithSegment& segment, i64 budget) {
    if (!(x >= 0) || !(y >= 0)) throw ArgumentError("need x >= 0 and y >= 0");
    IntRange r = interval_range(x, y);
    if (r.count() == 0) return {};
    if (!has_fn(segment.want, ArithFn::Mu) ||
        !segment.covers(static_cast<u64>(r.lo), static_cast<u64>(r.hi)))
        throw ArgumentError("segment does not cover (x, x+y] with mu populated");
    return sum_terms(r.lo, r.hi, k, alpha,
                     [&](i64 n) {
                         return std::complex<double>(segment.mu_at(static_cast<u64>(n)), 0.0);
                     },
                     budget);
}

ExpSumResult twisted_expsum(double x, double y, int k, const PhaseReal& alpha,
                            std::span<const std::complex<double>> weights, i64 budget) {
    if (!(x >= 0) || !(y >= 0)) throw ArgumentError("need x >= 0 and y >= 0");
    IntRange r = interval_range(x, y);
    if (static_cast<i64>(weights.size()) != r.count())
        throw ArgumentError("weight array does not match the integer count of (x, x+y]");
    return sum_terms(r.lo, r.hi, k, alpha,
                     [&](i64 n) { return weights[static_cast<size_t>(n - r.lo - 1)]; }, budget);
}

ExpSumResult weighted_expsum(i64 lo, i64 hi, int k, const PhaseReal& alpha,
                             const std::function<std::complex<double>(i64)>& weight, i64 budget) {
    return sum_terms(lo, hi, k, alpha, weight, budget);
}

std::complex<double> gauss_sum(u64 q, i64 a, int k, u64 crt_threshold) {
    if (q < 1) throw ArgumentError("q must be >= 1");
    if (k < 1) throw ArgumentError("k must be >= 1");
    u64 a_mod = normalize_mod(a, q);
    if (std::gcd(a_mod, q) != 1) throw ArgumentError("gauss_sum requires gcd(a,q) = 1");
    if (q == 1) return {1.0, 0.0};

    auto factors = factorize(q);
    if (q > crt_threshold && factors.size() > 1) {
        // S(q,a) splits multiplicatively over coprime factors
        std::complex<double> prod{1.0, 0.0};
        for (const auto& [p, e] : factors) {
            u64 qi = 1;
            for (unsigned i = 0; i < e; ++i) qi *= p;
            u64 m = q / qi;
            u64 ai = mulmod(a_mod % qi, powmod(m % qi, static_cast<u64>(k - 1), qi), qi);
            prod *= gauss_sum(qi, static_cast<i64>(ai), k, crt_threshold);
        }
        return prod;
    }

    auto roots = unit_roots(q);
    CompSum re, im;
    for (u64 x = 1; x <= q; ++x) {
        u64 t = powmod(x, static_cast<u64>(k), q);
        u64 idx = mulmod(a_mod, t, q);
        re.add(roots[idx].real());
        im.add(roots[idx].imag());
    }
    return {re.total(), im.total()};
}

std::vector<std::complex<double>> gauss_sum_all(u64 q, int k) {
    if (q < 1) throw ArgumentError("q must be >= 1");
    if (k < 1) throw ArgumentError("k must be >= 1");
    std::vector<std::complex<double>> out(q);
    if (q == 1) {
        out[0] = {1.0, 0.0};
        return out;
    }
    // bucket x^k mod q once, then each S(q,a) is a weighted root sum
    std::vector<std::uint32_t> count(q, 0);
    for (u64 x = 1; x <= q; ++x) count[powmod(x, static_cast<u64>(k), q)]++;
    std::vector<u64> hit;
    for (u64 t = 0; t < q; ++t)
        if (count[t]) hit.push_back(t);
    auto roots = unit_roots(q);
    for (u64 a = 1; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        CompSum re, im;
        for (u64 t : hit) {
            double m = count[t];
            u64 idx = mulmod(a, t, q);
            re.add(m * roots[idx].real());
            im.add(m * roots[idx].imag());
        }
        out[a] = {re.total(), im.total()};
    }
    return out;
}

WkWeight w_k(u64 q, int k) {
    if (k < 3) throw ArgumentError("w_k is defined for k >= 3");
    if (q < 1) throw ArgumentError("q must be >= 1");
    double value = 1.0;
    for (const auto& [p, e] : factorize(q)) {
        unsigned u = (e - 1) / static_cast<unsigned>(k);
        unsigned v = e - static_cast<unsigned>(k) * u;
        double pd = static_cast<double>(p);
        if (v == 1)
            value *= k * std::pow(pd, -static_cast<double>(u) - 0.5);
        else
            value *= std::pow(pd, -static_cast<double>(u) - 1.0);
    }
    return {q, k, value};
}

double major_arc_term(u64 q, i64 a, const PhaseReal& alpha, double x, double y, int k) {
    if (q < 1) throw ArgumentError("q must be >= 1");
    u64 a_mod = normalize_mod(a, q);
    if (std::gcd(a_mod, q) != 1) throw ArgumentError("major_arc_term requires gcd(a,q) = 1");
    mpq_class lambda = alpha.value() - mpq_class(mpz_class(a), mpz_class(q));
    double abs_l = mpq_abs_to_double(lambda);
    double denom = 1.0 + y * std::pow(x, k - 1) * abs_l;
    return w_k(q, k).value * y / denom;
}

mpz_class r_poly(const mpz_class& n, const mpz_class& h, int k) {
    if (h < 1) throw ArgumentError("h must be >= 1");
    if (k < 1) throw ArgumentError("k must be >= 1");
    mpz_class total = 0, np = 1;
    for (int j = 0; j <= k - 1; ++j) {
        mpz_class hp;
        mpz_pow_ui(hp.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(k - 1 - j));
        total += binomial(static_cast<unsigned>(k), static_cast<unsigned>(j)) * np * hp;
        np *= n;
    }
    return total;
}

namespace {

// w_k(q / gcd(q, value)) with memoized divisor weights.
struct WkByDivisor {
    u64 q;
    int k;
    std::map<u64, double> cache;
    double at(u64 g) {
        u64 d = q / g;
        auto it = cache.find(d);
        if (it != cache.end()) return it->second;
        double v = w_k(d, k).value;
        cache.emplace(d, v);
        return v;
    }
};

u64 r_poly_mod(u64 n, u64 h, int k, u64 q) {
    // ((n+h)^k - n^k)/h mod q via the binomial expansion
    u64 total = 0;
    u64 np = 1 % q;
    for (int j = 0; j <= k - 1; ++j) {
        mpz_class bin = binomial(static_cast<unsigned>(k), static_cast<unsigned>(j));
        u64 b = mpz_class(bin % q).get_ui();
        u64 hp = powmod(h % q, static_cast<u64>(k - 1 - j), q);
        total = (total + mulmod(b, mulmod(np, hp, q), q)) % q;
        np = mulmod(np, n % q, q);
    }
    return total;
}

}  // namespace

double wk_sum_lemma37(u64 N, u64 q, unsigned j, int k, unsigned c) {
    if (N < 1 || q < 1) throw ArgumentError("need N >= 1 and q >= 1");
    if (j < 1 || static_cast<int>(j) > k) throw ArgumentError("need 1 <= j <= k");
    ArithSegment seg;
    if (c > 0) seg = sieve_segment(N, N, static_cast<unsigned>(ArithFn::Tau));
    WkByDivisor wk{q, k, {}};
    CompSum total;
    for (u64 n = N + 1; n <= 2 * N; ++n) {
        u64 t = powmod(n % q, j, q);
        u64 g = std::gcd(q, t);
        double tc = c > 0 ? std::pow(static_cast<double>(seg.tau_at(n)), static_cast<double>(c)) : 1.0;
        total.add(tc * wk.at(g));
    }
    return total.total();
}

double wk_sum_lemma37_pairs(u64 N, u64 q, u64 h, int k, unsigned c) {
    if (N < 1 || q < 1 || h < 1) throw ArgumentError("need N, q, h >= 1");
    ArithSegment seg;
    if (c > 0) seg = sieve_segment(N, N + h, static_cast<unsigned>(ArithFn::Tau));
    WkByDivisor wk{q, k, {}};
    CompSum total;
    for (u64 n = N + 1; n <= 2 * N; ++n) {
        if (std::gcd(n, h) != 1) continue;
        u64 g = std::gcd(q, r_poly_mod(n, h, k, q));
        double tc = 1.0;
        if (c > 0)
            tc = std::pow(static_cast<double>(seg.tau_at(n)), static_cast<double>(c)) *
                 std::pow(static_cast<double>(seg.tau_at(n + h)), static_cast<double>(c));
        total.add(tc * wk.at(g));
    }
    return total.total();
}

double gauss_ratio_scan(u64 q_max, int k) {
    std::vector<double> per_q(q_max + 1, 0.0);
    parallel_for_index(static_cast<i64>(q_max), [&](i64 idx) {
        u64 q = static_cast<u64>(idx) + 1;
        double denom = static_cast<double>(q) * w_k(q, k).value;
        auto sums = gauss_sum_all(q, k);
        double best = 0.0;
        for (u64 a = 0; a < q; ++a) best = std::max(best, std::abs(sums[a]) / denom);
        per_q[q] = best;
    });
    double best = 0.0;
    for (u64 q = 1; q <= q_max; ++q) best = std::max(best, per_q[q]);
    return best;
}

}  // namespace moblab
