#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include <gmpxx.h>

namespace moblab {

// Thin RAII wrapper around mpfr_t. Each value carries its own precision;
// binary operations round to the precision of the left operand.
class MpReal {
  public:
    explicit MpReal(mpfr_prec_t prec = 256) { mpfr_init2(v_, prec); }
    MpReal(const MpReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    MpReal(MpReal&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    MpReal& operator=(MpReal o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpReal() { mpfr_clear(v_); }

    static MpReal of(double x, mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static MpReal of(const mpq_class& x, mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static MpReal of(const mpz_class& x, mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
        return r;
    }
    // 2^e, exact.
    static MpReal pow2(long e) {
        MpReal r(16);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }
    int cmp(const MpReal& o) const { return mpfr_cmp(v_, o.v_); }
    int cmp(const mpq_class& o) const { return mpfr_cmp_q(v_, o.get_mpq_t()); }
    bool is_one() const { return mpfr_cmp_ui(v_, 1) == 0; }

    MpReal log() const {
        MpReal r(prec());
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpReal sqrt() const {
        MpReal r(prec());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpReal pow(const MpReal& e) const {
        MpReal r(prec());
        mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
        return r;
    }
    MpReal pow(double e) const { return pow(MpReal::of(e, prec())); }
    MpReal pow(const mpq_class& e) const { return pow(MpReal::of(e, prec())); }

    friend MpReal operator+(const MpReal& a, const MpReal& b) {
        MpReal r(a.prec());
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator-(const MpReal& a, const MpReal& b) {
        MpReal r(a.prec());
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator*(const MpReal& a, const MpReal& b) {
        MpReal r(a.prec());
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator/(const MpReal& a, const MpReal& b) {
        MpReal r(a.prec());
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    MpReal operator-() const {
        MpReal r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    MpReal abs() const {
        MpReal r(prec());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    // exponent of the leading bit; only meaningful for nonzero values
    long exp2_magnitude() const { return sign() == 0 ? 0 : mpfr_get_exp(v_); }

    // Nearest integer below, exact.
    mpz_class floor_mpz() const {
        MpReal f(prec());
        mpfr_floor(f.v_, v_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), f.v_, MPFR_RNDZ);
        return z;
    }

    // value * 2^bits, rounded to nearest integer; exact scaling.
    mpz_class scale_to_bits(long bits) const {
        MpReal s(prec());
        mpfr_mul_2si(s.v_, v_, bits, MPFR_RNDN);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), s.v_, MPFR_RNDN);
        return z;
    }

    mpfr_srcptr raw() const { return v_; }

  private:
    mpfr_t v_;
};

}  // namespace moblab
