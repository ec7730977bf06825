#include "moblab/vaughan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "moblab/errors.hpp"
#include "moblab/mpreal.hpp"
#include "moblab/parallel.hpp"
#include "moblab/primes.hpp"
#include "moblab/sieve.hpp"

namespace moblab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

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

struct CompComplex {
    CompSum re, im;
    void add(const std::complex<double>& z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> total() const { return {re.total(), im.total()}; }
};

}  // namespace

VaughanPlan make_plan(double x, const mpq_class& theta, int k, double c1) {
    if (k < 3) throw ParameterError("k must be >= 3");
    if (theta <= mpq_class(3, 4)) throw ParameterError("theta must exceed 3/4");
    if (theta > 1) throw ParameterError("theta must be <= 1");
    if (!(x >= 2)) throw ParameterError("x must be >= 2");

    VaughanPlan plan;
    plan.x = x;
    plan.k = k;
    plan.c1 = c1 < 0 ? 8.0 * (k + 1) : c1;
    plan.theta = theta;
    plan.sigma_k = mpq_class(1, 2 * static_cast<long>(k) * (k - 1));
    plan.gamma = 1 / mpq_class(theta - mpq_class(3, 4));
    mpq_class rho_a = plan.sigma_k / (8 * plan.gamma);
    mpq_class rho_b = (theta - mpq_class(2, 3)) / 2;
    plan.rho = std::min(rho_a, rho_b) / 2;
    plan.rho.canonicalize();
    plan.gamma.canonicalize();

    mpq_class u_exp = theta / 2 - plan.rho;
    mpq_class v_exp = 1 - theta + 2 * plan.rho;
    MpReal xr = MpReal::of(x, 192);
    plan.y = xr.pow(theta).to_double();
    plan.U = xr.pow(u_exp).to_double();
    plan.V = xr.pow(v_exp).to_double();

    auto check = [&](const std::string& name, const mpq_class& lhs, const mpq_class& rhs) {
        plan.checks.push_back({name, lhs, rhs, lhs <= rhs});
    };
    check("V <= y x^{-gamma rho / sigma_k}", v_exp, theta - plan.gamma * plan.rho / plan.sigma_k);
    check("V^{2k} <= y x^{k-1-2k rho}", 2 * k * v_exp,
          theta + (k - 1) - 2 * k * plan.rho);
    check("x^{1/2} <= UV", mpq_class(1, 2), u_exp + v_exp);
    check("UV <= x^{theta - 2 rho}", u_exp + v_exp, theta - 2 * plan.rho);

    if (!(plan.U > 1.0)) throw ParameterError("x too small: U <= 1");
    if (!(plan.V > 1.0)) throw ParameterError("x too small: V <= 1");
    if (!(plan.U * plan.V <= x)) throw ParameterError("UV exceeds x at this scale");
    return plan;
}

VaughanPlan make_plan_xy(double x, double y, int k, double c1) {
    if (!(x >= 2) || !(y >= 2)) throw ParameterError("need x, y >= 2");
    mpq_class theta = (y == x) ? mpq_class(1) : mpq_class(std::log(y) / std::log(x));
    VaughanPlan plan = make_plan(x, theta, k, c1);
    plan.y = y;
    return plan;
}

i64 lambda0(i64 v, double U, double V) {
    if (v < 1) throw ArgumentError("v must be >= 1");
    i64 total = 0;
    for (u64 d : divisors(static_cast<u64>(v))) {
        if (static_cast<double>(d) > V) continue;
        u64 m = static_cast<u64>(v) / d;
        if (static_cast<double>(m) > U) continue;
        total += mobius(d) * mobius(m);
    }
    return total;
}

i64 lambda1(i64 u, double V) {
    if (u < 1) throw ArgumentError("u must be >= 1");
    i64 total = 0;
    for (u64 d : divisors(static_cast<u64>(u)))
        if (static_cast<double>(d) > V) total += mobius(d);
    return total;
}

bool vaughan_identity_check(i64 n, double U, double V) {
    if (!(static_cast<double>(n) > std::max(U, V)))
        throw ParameterError("identity requires n > max(U, V)");
    i64 lhs = mobius(static_cast<u64>(n));
    i64 small = 0, large = 0;
    for (u64 d : divisors(static_cast<u64>(n))) {
        int mu_d = mobius(d);
        u64 rest = static_cast<u64>(n) / d;
        for (u64 m : divisors(rest)) {
            int term = mu_d * mobius(m);
            if (term == 0) continue;
            if (static_cast<double>(d) <= V && static_cast<double>(m) <= U) small += term;
            if (static_cast<double>(d) > V && static_cast<double>(m) > U) large += term;
        }
    }
    return lhs == -small + large;
}

std::complex<double> type_I_sum(double M, const std::function<std::complex<double>(i64)>& a,
                                double x, double y, int k, const PhaseReal& alpha, i64 budget) {
    if (!(M > 0)) throw ArgumentError("M must be positive");
    IntRange mr = int_range(mpq_class(M), 2 * mpq_class(M));
    IntRange full = interval_range(x, y);
    if (full.count() > budget) throw ResourceError("type I budget exceeded");
    PhaseEval eval(alpha, k, std::max<i64>(full.hi, 1));
    CompComplex total;
    for (i64 m = mr.lo + 1; m <= mr.hi; ++m) {
        std::complex<double> am = a(m);
        if (am == std::complex<double>(0.0, 0.0)) continue;
        IntRange nr = interval_range_div(x, y, m);
        CompComplex inner;
        for (i64 n = nr.lo + 1; n <= nr.hi; ++n) {
            double ph = kTwoPi * eval.frac(m * n);
            inner.add({std::cos(ph), std::sin(ph)});
        }
        total.add(am * inner.total());
    }
    return total.total();
}

std::complex<double> type_II_sum(double M, const std::function<std::complex<double>(i64)>& a,
                                 const std::function<std::complex<double>(i64)>& b, double x,
                                 double y, int k, const PhaseReal& alpha, i64 budget) {
    if (!(M > 0)) throw ArgumentError("M must be positive");
    IntRange mr = int_range(mpq_class(M), 2 * mpq_class(M));
    IntRange full = interval_range(x, y);
    if (full.count() > budget) throw ResourceError("type II budget exceeded");
    PhaseEval eval(alpha, k, std::max<i64>(full.hi, 1));
    CompComplex total;
    for (i64 m = mr.lo + 1; m <= mr.hi; ++m) {
        std::complex<double> am = a(m);
        if (am == std::complex<double>(0.0, 0.0)) continue;
        IntRange nr = interval_range_div(x, y, m);
        CompComplex inner;
        for (i64 n = nr.lo + 1; n <= nr.hi; ++n) {
            std::complex<double> bn = b(n);
            if (bn == std::complex<double>(0.0, 0.0)) continue;
            double ph = kTwoPi * eval.frac(m * n);
            inner.add(bn * std::complex<double>{std::cos(ph), std::sin(ph)});
        }
        total.add(am * inner.total());
    }
    return total.total();
}

Reconstruction reconstruct(double x, double y, int k, const PhaseReal& alpha, double U, double V,
                           i64 budget) {
    if (!(U >= 1) || !(V >= 1)) throw ArgumentError("need U, V >= 1");
    if (!(x >= std::max(U, V)))
        throw ParameterError("interval must satisfy n > max(U,V) for every n > x");
    IntRange full = interval_range(x, y);
    i64 count = full.count();
    if (count <= 0) throw ArgumentError("empty interval");
    if (count > budget) throw ResourceError("reconstruction budget exceeded");

    const i64 base = full.lo;  // table index: n - base - 1
    // one phase evaluation per n, shared by S1, S2 and the direct sum
    std::vector<std::complex<double>> phase(static_cast<size_t>(count));
    {
        constexpr i64 kBlock = 1 << 15;
        i64 n_blocks = (count + kBlock - 1) / kBlock;
        parallel_for_index(n_blocks, [&](i64 bidx) {
            i64 first = base + 1 + bidx * kBlock;
            i64 last = std::min<i64>(base + (bidx + 1) * kBlock, full.hi);
            PhaseEval eval(alpha, k, last);
            for (i64 n = first; n <= last; ++n) {
                double ph = kTwoPi * eval.frac(n);
                phase[static_cast<size_t>(n - base - 1)] = {std::cos(ph), std::sin(ph)};
            }
        });
    }

    const i64 floor_u = to_i64(floor_mpq(mpq_class(U)));
    const i64 floor_v = to_i64(floor_mpq(mpq_class(V)));

    // S1 over v <= UV: the divisor structure forces v <= floor(U) floor(V),
    // and v > x+y has an empty inner range
    CompComplex s1;
    const i64 v_max = std::min(floor_u * floor_v, full.hi);
    for (i64 v = 1; v <= v_max; ++v) {
        i64 l0 = lambda0(v, U, V);
        if (l0 == 0) continue;
        IntRange lr = interval_range_div(x, y, v);
        CompComplex inner;
        for (i64 l = lr.lo + 1; l <= lr.hi; ++l)
            inner.add(phase[static_cast<size_t>(l * v - base - 1)]);
        std::complex<double> t = inner.total();
        s1.add(static_cast<double>(l0) * t);
    }

    // S2 over V < u <= (x+y)/U with mu(m) for m > U
    mpq_class hi_q = mpq_class(x) + mpq_class(y);
    i64 u_max = to_i64(floor_mpq(hi_q / (floor_u + 1)));
    i64 m_max = u_max > floor_v ? to_i64(floor_mpq(hi_q / (floor_v + 1))) : 0;
    ArithSegment mu_seg;
    if (m_max > 0) mu_seg = sieve_segment(0, static_cast<u64>(m_max), static_cast<unsigned>(ArithFn::Mu));
    CompComplex s2;
    for (i64 u = floor_v + 1; u <= u_max; ++u) {
        i64 l1 = lambda1(u, V);
        if (l1 == 0) continue;
        IntRange mr = interval_range_div(x, y, u);
        mr.lo = std::max(mr.lo, floor_u);
        CompComplex inner;
        for (i64 m = mr.lo + 1; m <= mr.hi; ++m) {
            int mu = mu_seg.mu_at(static_cast<u64>(m));
            if (mu == 0) continue;
            std::complex<double> ph = phase[static_cast<size_t>(m * u - base - 1)];
            inner.add(static_cast<double>(mu) * ph);
        }
        s2.add(static_cast<double>(l1) * inner.total());
    }

    // direct S_k over the same phase table
    ArithSegment main_seg = sieve_segment(static_cast<u64>(full.lo), static_cast<u64>(count),
                                          static_cast<unsigned>(ArithFn::Mu));
    CompComplex direct;
    for (i64 n = full.lo + 1; n <= full.hi; ++n) {
        int mu = main_seg.mu_at(static_cast<u64>(n));
        if (mu == 0) continue;
        direct.add(static_cast<double>(mu) * phase[static_cast<size_t>(n - base - 1)]);
    }

    Reconstruction out;
    out.s1 = s1.total();
    out.s2 = s2.total();
    out.direct = direct.total();
    out.residual = std::abs(-out.s1 + out.s2 - out.direct);
    out.bound = y * std::ldexp(1.0, -30);
    out.U = U;
    out.V = V;
    return out;
}

Reconstruction reconstruct(double x, double y, int k, const PhaseReal& alpha,
                           const VaughanPlan& plan, i64 budget) {
    return reconstruct(x, y, k, alpha, plan.U, plan.V, budget);
}

S2Split s2_split(double x, double y, int k, const PhaseReal& alpha, double U, double V,
                 i64 budget) {
    if (!(U >= 1) || !(V >= 1)) throw ArgumentError("need U, V >= 1");
    IntRange full = interval_range(x, y);
    if (full.count() <= 0) return {};
    if (full.count() > budget) throw ResourceError("s2 split budget exceeded");
    const i64 base = full.lo;
    std::vector<std::complex<double>> phase(static_cast<size_t>(full.count()));
    {
        constexpr i64 kBlock = 1 << 15;
        i64 n_blocks = (full.count() + kBlock - 1) / kBlock;
        parallel_for_index(n_blocks, [&](i64 bidx) {
            i64 first = base + 1 + bidx * kBlock;
            i64 last = std::min<i64>(base + (bidx + 1) * kBlock, full.hi);
            PhaseEval eval(alpha, k, last);
            for (i64 n = first; n <= last; ++n) {
                double ph = kTwoPi * eval.frac(n);
                phase[static_cast<size_t>(n - base - 1)] = {std::cos(ph), std::sin(ph)};
            }
        });
    }
    const i64 floor_u = to_i64(floor_mpq(mpq_class(U)));
    const i64 floor_v = to_i64(floor_mpq(mpq_class(V)));
    mpq_class hi_q = mpq_class(x) + mpq_class(y);
    i64 u_max = to_i64(floor_mpq(hi_q / (floor_u + 1)));
    i64 m_max = u_max > floor_v ? to_i64(floor_mpq(hi_q / (floor_v + 1))) : 0;
    ArithSegment mu_seg;
    if (m_max > 0)
        mu_seg = sieve_segment(0, static_cast<u64>(m_max), static_cast<unsigned>(ArithFn::Mu));
    CompComplex s21, s22;
    const mpq_class xq(x);
    for (i64 u = floor_v + 1; u <= u_max; ++u) {
        i64 l1 = lambda1(u, V);
        if (l1 == 0) continue;
        IntRange mr = interval_range_div(x, y, u);
        mr.lo = std::max(mr.lo, floor_u);
        CompComplex inner;
        for (i64 m = mr.lo + 1; m <= mr.hi; ++m) {
            int mu = mu_seg.mu_at(static_cast<u64>(m));
            if (mu == 0) continue;
            inner.add(static_cast<double>(mu) * phase[static_cast<size_t>(m * u - base - 1)]);
        }
        bool high = mpq_class(u) * u >= xq;  // u >= sqrt(x), exact
        (high ? s21 : s22).add(static_cast<double>(l1) * inner.total());
    }
    return {s21.total(), s22.total()};
}

std::vector<std::pair<double, double>> dyadic_cover(double lo, double hi) {
    if (!(lo > 0) || !(hi > lo)) throw ArgumentError("need 0 < lo < hi");
    std::vector<std::pair<double, double>> out;
    int e;
    std::frexp(lo, &e);  // lo in [2^{e-1}, 2^e)
    for (int j = e - 1;; ++j) {
        double start = std::ldexp(1.0, j);
        double stop = std::ldexp(1.0, j + 1);
        if (start >= hi) break;
        out.emplace_back(std::max(start, lo), std::min(stop, hi));
    }
    return out;
}

}  // namespace moblab
