#pragma once

#include <optional>
#include <string>

#include <gmpxx.h>

#include "moblab/int_util.hpp"
#include "moblab/mpreal.hpp"

namespace moblab {

// A phase alpha held to a stated precision. Values built from rational or
// decimal input are exact; values built from an MpReal are fixed-point
// approximations mant/2^bits with |intended - stored| <= radius.
//
// All downstream arithmetic (continued fractions, classification, phase
// reduction) operates on the stored value exactly; radius only limits how far
// continued-fraction expansions may be certified against the intended real.
class PhaseReal {
  public:
    PhaseReal() : PhaseReal(from_fraction(0, 1)) {}

    static PhaseReal from_fraction(const mpz_class& a, const mpz_class& q, long bits = 128);
    static PhaseReal from_double(double x, long bits = 128);
    // Exact decimal such as "0.3", "-1.25e-9", or a fraction "a/q".
    static PhaseReal parse(const std::string& s, long bits = 128);
    static PhaseReal from_real(const MpReal& v, long bits);

    bool exact() const { return exact_.has_value(); }
    const mpq_class& exact_value() const { return *exact_; }
    // The stored value as an exact rational (mant/2^bits when inexact).
    mpq_class value() const;
    // Raw fixed-point numerator: value = mantissa / 2^bits when inexact.
    const mpz_class& mantissa() const { return mant_; }
    long bits() const { return bits_; }
    const mpq_class& radius() const { return radius_; }
    double to_double() const { return mpq_get_d_safe(value()); }

    PhaseReal times_int(const mpz_class& c) const;
    PhaseReal plus(const PhaseReal& o) const;  // exactness preserved when both exact
    PhaseReal reduced_mod1() const;

    // bits needed so that frac(n^k alpha) carries absolute error <= 2^-63
    // for all n <= n_max.
    static long recommended_bits(int k, double n_max);

    static double mpq_get_d_safe(const mpq_class& v) { return mpq_get_d(v.get_mpq_t()); }

  private:
    PhaseReal(mpz_class mant, long bits, std::optional<mpq_class> exact, mpq_class radius)
        : mant_(std::move(mant)), bits_(bits), exact_(std::move(exact)), radius_(std::move(radius)) {}

    mpz_class mant_;
    long bits_;
    std::optional<mpq_class> exact_;
    mpq_class radius_;
};

// Evaluates frac(n^k alpha) repeatedly for one (alpha, k). Exact rationals go
// through modular exponentiation; inexact values multiply n^k against the
// fixed-point mantissa and keep the low word.
class PhaseEval {
  public:
    // n_max: largest n that will be passed to frac(); used to enforce the
    // precision contract for inexact alpha.
    PhaseEval(const PhaseReal& alpha, int k, i64 n_max);

    double frac(i64 n);
    // Per-term absolute error bound on the returned fractional part.
    double max_phase_error() const { return max_err_; }

  private:
    enum class Mode { SmallExact, BigExact, FixedPoint };
    Mode mode_;
    int k_;
    double max_err_;
    // SmallExact
    u64 q_u64_ = 1, a_u64_ = 0;
    // BigExact
    mpz_class a_z_, q_z_;
    // FixedPoint
    mpz_class mant_;
    long bits_ = 0;
    // scratch
    mpz_class t1_, t2_;
};

// frac(n^k alpha) as a standalone call.
double frac_nk_alpha(i64 n, int k, const PhaseReal& alpha);

}  // namespace moblab
