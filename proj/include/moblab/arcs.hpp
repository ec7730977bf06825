#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "moblab/int_util.hpp"
#include "moblab/phase.hpp"

namespace moblab {

struct Convergent {
    mpz_class a;
    mpz_class q;
};

// All continued-fraction convergents a/q of alpha with q <= q_max, in order.
// Throws PrecisionError when alpha's precision cannot certify the list out to
// q_max (only possible for inexact alpha).
std::vector<Convergent> convergents(const PhaseReal& alpha, const mpz_class& q_max);

// alpha = a/q + lambda with gcd(a,q) = 1; lambda is exact relative to the
// stored value of alpha.
struct DirichletApprox {
    mpz_class a;
    mpz_class q;
    mpq_class lambda;
    PhaseReal alpha;

    double lambda_d() const { return PhaseReal::mpq_get_d_safe(lambda); }
};

// Canonical Dirichlet witness: the first continued-fraction convergent with
// |q alpha - a| < 1/bound. Dirichlet's lemma guarantees one exists with
// q <= bound.
DirichletApprox dirichlet_approx(const PhaseReal& alpha, double bound);

// The triple P = L^c1, Q = x^{k-2} y^2 / P, R = x^{k-1} y. R and the
// numerator of Q are held exactly; P is transcendental for c1 > 0 and is
// compared against rationals by precision escalation.
class ArcParams {
  public:
    ArcParams(double x, double y, int k, double c1);

    double x() const { return x_; }
    double y() const { return y_; }
    int k() const { return k_; }
    double c1() const { return c1_; }
    double L() const { return L_d_; }
    double P() const { return P_d_; }
    double Q() const { return Q_d_; }
    double R() const { return R_d_; }
    const mpq_class& R_exact() const { return R_; }
    const mpq_class& Q_numerator() const { return A_; }  // Q = A / P

    // sign of (r - P), certified; exact when c1 == 0.
    int cmp_with_P(const mpq_class& r) const;
    // sign of (A - P^2), i.e. of (Q - P) up to the positive factor P.
    int cmp_A_with_P_squared() const;

  private:
    double x_, y_, c1_;
    int k_;
    bool p_is_one_;
    mpq_class A_;  // x^{k-2} y^2
    mpq_class R_;  // x^{k-1} y
    double L_d_, P_d_, Q_d_, R_d_;
};

enum class ArcLabel { A, B, C };

inline char arc_label_char(ArcLabel l) { return l == ArcLabel::A ? 'A' : l == ArcLabel::B ? 'B' : 'C'; }

struct ArcClass {
    ArcLabel label;
    DirichletApprox witness;
};

// Whether the witness satisfies the defining inequalities of the label.
bool arc_label_holds(const ArcParams& params, const DirichletApprox& w, ArcLabel label);

// Classifies alpha in [0,1] into arc A, B, or C with its canonical witness.
ArcClass classify(const PhaseReal& alpha, const ArcParams& params);

}  // namespace moblab
