#include "moblab/phase.hpp"

#include <cmath>

#include "moblab/errors.hpp"

namespace moblab {

namespace {

mpz_class round_scale(const mpq_class& v, long bits) {
    mpq_class s = v;
    mpq_mul_2exp(s.get_mpq_t(), s.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
    // round to nearest: floor(s + 1/2)
    s += mpq_class(1, 2);
    return floor_mpq(s);
}

}  // namespace

PhaseReal PhaseReal::from_fraction(const mpz_class& a, const mpz_class& q, long bits) {
    if (q <= 0) throw ArgumentError("phase denominator must be positive");
    mpq_class v(a, q);
    v.canonicalize();
    return PhaseReal(round_scale(v, bits), bits, v, mpq_class(0));
}

PhaseReal PhaseReal::from_double(double x, long bits) {
    if (!std::isfinite(x)) throw ArgumentError("phase must be finite");
    mpq_class v(x);
    return PhaseReal(round_scale(v, bits), bits, v, mpq_class(0));
}

PhaseReal PhaseReal::from_real(const MpReal& v, long bits) {
    mpz_class mant = v.scale_to_bits(bits);
    mpq_class radius;
    mpq_set_ui(radius.get_mpq_t(), 1, 1);
    mpq_div_2exp(radius.get_mpq_t(), radius.get_mpq_t(), static_cast<mp_bitcnt_t>(bits - 1));
    return PhaseReal(std::move(mant), bits, std::nullopt, radius);
}

PhaseReal PhaseReal::parse(const std::string& s, long bits) {
    if (s.empty()) throw ArgumentError("empty phase string");
    // base 10 always; the mpz string constructor would treat a leading 0 as octal
    auto parse_z = [](std::string t) {
        if (!t.empty() && t[0] == '+') t = t.substr(1);
        mpz_class z;
        if (t.empty() || mpz_set_str(z.get_mpz_t(), t.c_str(), 10) != 0)
            throw ArgumentError("bad integer literal: " + t);
        return z;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class a = parse_z(s.substr(0, slash));
        mpz_class q = parse_z(s.substr(slash + 1));
        return from_fraction(a, q, bits);
    }
    // exact decimal with optional exponent
    std::string t = s;
    long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        try {
            exp10 = std::stol(t.substr(epos + 1));
        } catch (const std::exception&) {
            throw ArgumentError("bad exponent in: " + s);
        }
        t = t.substr(0, epos);
    }
    auto dot = t.find('.');
    std::string digits = t;
    long frac_len = 0;
    if (dot != std::string::npos) {
        digits = t.substr(0, dot) + t.substr(dot + 1);
        frac_len = static_cast<long>(t.size() - dot - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") throw ArgumentError("bad decimal: " + s);
    mpq_class v(parse_z(digits));
    long net = exp10 - frac_len;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net >= 0)
        v *= mpq_class(p10);
    else
        v /= mpq_class(p10);
    v.canonicalize();
    return PhaseReal(round_scale(v, bits), bits, v, mpq_class(0));
}

mpq_class PhaseReal::value() const {
    if (exact_) return *exact_;
    mpq_class v(mant_);
    mpq_div_2exp(v.get_mpq_t(), v.get_mpq_t(), static_cast<mp_bitcnt_t>(bits_));
    return v;
}

PhaseReal PhaseReal::times_int(const mpz_class& c) const {
    std::optional<mpq_class> e;
    if (exact_) {
        e = *exact_ * c;
        e->canonicalize();
    }
    mpq_class r = radius_;
    mpz_class ac = abs(c);
    r *= ac;
    return PhaseReal(mant_ * c, bits_, std::move(e), r);
}

PhaseReal PhaseReal::plus(const PhaseReal& o) const {
    if (exact_ && o.exact_) {
        mpq_class v = *exact_ + *o.exact_;
        v.canonicalize();
        long b = std::max(bits_, o.bits_);
        return PhaseReal(round_scale(v, b), b, v, mpq_class(0));
    }
    // align mantissas to the finer scale; shifting is exact, so the stored
    // sum is the exact sum of the stored operands
    long b = std::max(bits_, o.bits_);
    mpz_class m1 = mant_ << static_cast<unsigned>(b - bits_);
    mpz_class m2 = o.mant_ << static_cast<unsigned>(b - o.bits_);
    return PhaseReal(m1 + m2, b, std::nullopt, radius_ + o.radius_);
}

PhaseReal PhaseReal::reduced_mod1() const {
    if (exact_) {
        mpq_class v = *exact_ - mpq_class(floor_mpq(*exact_));
        v.canonicalize();
        return PhaseReal(round_scale(v, bits_), bits_, v, mpq_class(0));
    }
    mpz_class m;
    mpz_class one_shift;
    mpz_ui_pow_ui(one_shift.get_mpz_t(), 2, static_cast<unsigned long>(bits_));
    mpz_fdiv_r(m.get_mpz_t(), mant_.get_mpz_t(), one_shift.get_mpz_t());
    return PhaseReal(std::move(m), bits_, std::nullopt, radius_);
}

long PhaseReal::recommended_bits(int k, double n_max) {
    double lg = n_max > 2 ? std::log2(n_max) : 1.0;
    long need = static_cast<long>(std::ceil(k * lg)) + 64;
    return std::max<long>(128, need);
}

PhaseEval::PhaseEval(const PhaseReal& alpha, int k, i64 n_max) : k_(k) {
    if (k < 1) throw ArgumentError("k must be >= 1");
    if (n_max < 1) n_max = 1;
    if (alpha.exact()) {
        const mpq_class& v = alpha.exact_value();
        q_z_ = v.get_den();
        mpz_fdiv_r(a_z_.get_mpz_t(), v.get_num_mpz_t(), q_z_.get_mpz_t());
        if (mpz_sizeinbase(q_z_.get_mpz_t(), 2) <= 62) {
            mode_ = Mode::SmallExact;
            q_u64_ = q_z_.get_ui();
            a_u64_ = a_z_.get_ui();
            max_err_ = std::ldexp(1.0, -52);
        } else {
            mode_ = Mode::BigExact;
            max_err_ = std::ldexp(1.0, -51);
        }
        return;
    }
    mode_ = Mode::FixedPoint;
    mant_ = alpha.mantissa();  // value = mant / 2^bits
    bits_ = alpha.bits();
    // contract: n_max^k * radius <= 2^-63 so the quantization of alpha
    // cannot move any phase by more than 2^-63
    mpz_class nk;
    mpz_ui_pow_ui(nk.get_mpz_t(), static_cast<unsigned long>(n_max), static_cast<unsigned long>(k));
    mpq_class shift = alpha.radius() * mpq_class(nk);
    mpq_class limit;
    mpq_set_ui(limit.get_mpq_t(), 1, 1);
    mpq_div_2exp(limit.get_mpq_t(), limit.get_mpq_t(), 63);
    if (shift > limit)
        throw PrecisionError("alpha carries too few bits for n <= " + std::to_string(n_max) +
                             ", k = " + std::to_string(k));
    max_err_ = std::ldexp(1.0, -50);
}

double PhaseEval::frac(i64 n) {
    switch (mode_) {
        case Mode::SmallExact: {
            i64 rem = n % static_cast<i64>(q_u64_);
            if (rem < 0) rem += static_cast<i64>(q_u64_);
            u64 t = powmod(static_cast<u64>(rem), static_cast<u64>(k_), q_u64_);
            u64 s = mulmod(a_u64_, t, q_u64_);
            return static_cast<double>(s) / static_cast<double>(q_u64_);
        }
        case Mode::BigExact: {
            mpz_set_si(t1_.get_mpz_t(), n);
            mpz_powm_ui(t1_.get_mpz_t(), t1_.get_mpz_t(), static_cast<unsigned long>(k_),
                        q_z_.get_mpz_t());
            t1_ *= a_z_;
            mpz_fdiv_r(t1_.get_mpz_t(), t1_.get_mpz_t(), q_z_.get_mpz_t());
            return mpz_get_d(t1_.get_mpz_t()) / mpz_get_d(q_z_.get_mpz_t());
        }
        case Mode::FixedPoint: {
            mpz_ui_pow_ui(t1_.get_mpz_t(), static_cast<unsigned long>(n),
                          static_cast<unsigned long>(k_));
            t1_ *= mant_;
            mpz_fdiv_r_2exp(t2_.get_mpz_t(), t1_.get_mpz_t(), static_cast<mp_bitcnt_t>(bits_));
            return std::ldexp(mpz_get_d(t2_.get_mpz_t()), static_cast<int>(-bits_));
        }
    }
    return 0.0;
}

double frac_nk_alpha(i64 n, int k, const PhaseReal& alpha) {
    PhaseEval eval(alpha, k, n);
    return eval.frac(n);
}

}  // namespace moblab
