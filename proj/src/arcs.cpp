#include "moblab/arcs.hpp"

#include <cmath>
#include <functional>

#include "moblab/errors.hpp"
#include "moblab/mpreal.hpp"

namespace moblab {

namespace {

mpq_class mpq_pow_ui(const mpq_class& b, unsigned e) {
    mpq_class r(1);
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

// Walks the continued fraction of alpha's stored value, certified against the
// intended real via the radius interval. visit(a, q, err) sees each
// convergent with err = |q*alpha - a| and returns true to stop.
//
// Returns true if the walk ended because visit accepted or the expansion
// terminated (exact rational); false if precision ran out first.
bool walk_convergents(const PhaseReal& alpha,
                      const std::function<bool(const mpz_class&, const mpz_class&, const mpq_class&)>& visit) {
    const mpq_class v = alpha.value();
    mpq_class lo = v - alpha.radius();
    mpq_class hi = v + alpha.radius();

    mpz_class p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    mpz_class p_cur = 0, q_cur = 1;    // filled by first digit
    bool first = true;

    for (;;) {
        mpz_class flo = floor_mpq(lo);
        mpz_class fhi = floor_mpq(hi);
        if (flo != fhi) return false;  // next digit not certified

        mpz_class digit = flo;
        if (first) {
            p_cur = digit;
            q_cur = 1;
            first = false;
        } else {
            mpz_class p_new = digit * p_cur + p_prev;
            mpz_class q_new = digit * q_cur + q_prev;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_new;
            q_cur = q_new;
        }
        mpq_class err = abs(mpq_class(q_cur) * v - mpq_class(p_cur));
        if (visit(p_cur, q_cur, err)) return true;

        mpq_class frac_lo = lo - mpq_class(digit);
        mpq_class frac_hi = hi - mpq_class(digit);
        if (frac_lo == 0) {
            // terminates here for the whole interval only when exact
            return hi == lo;
        }
        if (frac_hi == 0) return false;
        mpq_class new_lo = 1 / frac_hi;
        mpq_class new_hi = 1 / frac_lo;
        lo = new_lo;
        hi = new_hi;
    }
}

}  // namespace

std::vector<Convergent> convergents(const PhaseReal& alpha, const mpz_class& q_max) {
    if (q_max < 1) throw ArgumentError("q_max must be >= 1");
    std::vector<Convergent> out;
    bool done = walk_convergents(alpha, [&](const mpz_class& a, const mpz_class& q, const mpq_class&) {
        if (q > q_max) return true;
        out.push_back({a, q});
        return false;
    });
    if (!done)
        throw PrecisionError("alpha carries too few bits to certify convergents up to q_max = " +
                             q_max.get_str());
    return out;
}

DirichletApprox dirichlet_approx(const PhaseReal& alpha, double bound) {
    if (!(bound >= 1)) throw ArgumentError("bound must be >= 1");
    mpq_class inv_bound = 1 / mpq_class(bound);
    DirichletApprox result;
    result.alpha = alpha;
    bool found = false;
    walk_convergents(alpha, [&](const mpz_class& a, const mpz_class& q, const mpq_class& err) {
        if (err < inv_bound) {
            result.a = a;
            result.q = q;
            found = true;
            return true;
        }
        return false;
    });
    if (!found)
        throw PrecisionError("alpha carries too few bits to locate a Dirichlet witness for bound " +
                             std::to_string(bound));
    result.lambda = alpha.value() - mpq_class(result.a) / mpq_class(result.q);
    result.lambda.canonicalize();
    return result;
}

ArcParams::ArcParams(double x, double y, int k, double c1) : x_(x), y_(y), c1_(c1), k_(k) {
    if (k < 3) throw ParameterError("k must be >= 3");
    if (!(y >= 2 && y <= x)) throw ParameterError("need 2 <= y <= x");
    if (!(c1 >= 0)) throw ParameterError("c1 must be >= 0");
    p_is_one_ = (c1 == 0.0);
    A_ = mpq_pow_ui(mpq_class(x), static_cast<unsigned>(k - 2)) * mpq_pow_ui(mpq_class(y), 2);
    R_ = mpq_pow_ui(mpq_class(x), static_cast<unsigned>(k - 1)) * mpq_class(y);
    L_d_ = std::log(x);
    MpReal P = MpReal::of(x, 128).log().pow(c1);
    P_d_ = P.to_double();
    Q_d_ = (MpReal::of(A_, 128) / P).to_double();
    R_d_ = PhaseReal::mpq_get_d_safe(R_);
    if (cmp_A_with_P_squared() <= 0)
        throw ParameterError("P >= Q: interval too short or c1 too large for this x");
}

int ArcParams::cmp_with_P(const mpq_class& r) const {
    if (p_is_one_) return cmp(r, mpq_class(1));
    if (r <= 0) return -1;  // P > 0 always (x >= 2)
    for (mpfr_prec_t p = 320; p <= 20480; p *= 2) {
        MpReal P = MpReal::of(x_, p).log().pow(c1_);
        MpReal d = MpReal::of(r, p) - P;
        if (d.sign() == 0) continue;  // exact tie impossible; not yet resolved
        long mag = std::max({P.exp2_magnitude(), d.exp2_magnitude(), 1L});
        // conservative bound on accumulated rounding in log, pow, sub
        if (d.abs().cmp(MpReal::pow2(mag - p + 24)) > 0) return d.sign();
    }
    throw PrecisionError("cannot certify comparison against P = (log x)^c1");
}

int ArcParams::cmp_A_with_P_squared() const {
    if (p_is_one_) return cmp(A_, mpq_class(1));
    for (mpfr_prec_t p = 320; p <= 20480; p *= 2) {
        MpReal P2 = MpReal::of(x_, p).log().pow(c1_);
        P2 = P2 * P2;
        MpReal d = MpReal::of(A_, p) - P2;
        if (d.sign() == 0) continue;
        long mag = std::max({P2.exp2_magnitude(), d.exp2_magnitude(), 1L});
        if (d.abs().cmp(MpReal::pow2(mag - p + 24)) > 0) return d.sign();
    }
    throw PrecisionError("cannot certify comparison P vs Q");
}

bool arc_label_holds(const ArcParams& params, const DirichletApprox& w, ArcLabel label) {
    mpq_class abs_l = abs(w.lambda);
    mpq_class q(w.q);
    bool q_le_P = params.cmp_with_P(q) <= 0;
    bool l_le_invR = abs_l * params.R_exact() <= 1;
    // |lambda| <= 1/(qQ)  <=>  |lambda| q A <= P
    bool l_le_invqQ = params.cmp_with_P(abs_l * q * params.Q_numerator()) <= 0;
    switch (label) {
        case ArcLabel::A:
            return q_le_P && l_le_invR;
        case ArcLabel::B:
            return q_le_P && !l_le_invR && l_le_invqQ;
        case ArcLabel::C: {
            if (w.q <= 0) return false;
            // P < q <= Q = A/P  <=>  P < q and P <= A/q
            bool q_le_Q = params.cmp_with_P(params.Q_numerator() / q) >= 0;
            return !q_le_P && q_le_Q && l_le_invqQ;
        }
    }
    return false;
}

ArcClass classify(const PhaseReal& alpha, const ArcParams& params) {
    mpq_class v = alpha.value();
    if (v < 0 || v > 1) throw ArgumentError("alpha must lie in [0,1]");

    // canonical witness: first convergent with |q alpha - a| < 1/Q,
    // i.e. |q alpha - a| * A < P
    DirichletApprox w;
    w.alpha = alpha;
    bool found = false;
    walk_convergents(alpha, [&](const mpz_class& a, const mpz_class& q, const mpq_class& err) {
        if (params.cmp_with_P(err * params.Q_numerator()) < 0) {
            w.a = a;
            w.q = q;
            found = true;
            return true;
        }
        return false;
    });
    if (!found) throw PrecisionError("alpha carries too few bits to classify against these arcs");
    w.lambda = v - mpq_class(w.a) / mpq_class(w.q);
    w.lambda.canonicalize();

    ArcLabel label;
    if (params.cmp_with_P(mpq_class(w.q)) <= 0)
        label = (abs(w.lambda) * params.R_exact() <= 1) ? ArcLabel::A : ArcLabel::B;
    else
        label = ArcLabel::C;
    if (!arc_label_holds(params, w, label))
        throw Error("internal: canonical witness satisfies no arc condition");
    return {label, w};
}

}  // namespace moblab
