#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "moblab/expsum.hpp"
#include "moblab/int_util.hpp"
#include "moblab/phase.hpp"

namespace moblab {

// Exponent-level side condition: holds when lhs_exp <= rhs_exp (powers of x).
struct PlanCheck {
    std::string name;
    mpq_class lhs_exp;
    mpq_class rhs_exp;
    bool ok;
};

struct VaughanPlan {
    double x = 0;
    double y = 0;  // x^theta
    int k = 0;
    double c1 = 0;
    mpq_class theta;
    mpq_class sigma_k;  // 1/(2k(k-1))
    mpq_class gamma;    // (theta - 3/4)^{-1}
    mpq_class rho;      // min(sigma_k/(8 gamma), (theta - 2/3)/2) / 2
    double U = 0;       // x^{theta/2 - rho}
    double V = 0;       // x^{1 - theta + 2 rho}
    std::vector<PlanCheck> checks;
};

// Parameter selection for the bilinear decomposition; theta must satisfy
// 3/4 < theta <= 1 and x must be large enough that U, V > 1.
// c1 < 0 selects the default 8(k+1).
VaughanPlan make_plan(double x, const mpq_class& theta, int k, double c1 = -1.0);
// Convenience: theta derived from y = x^theta.
VaughanPlan make_plan_xy(double x, double y, int k, double c1 = -1.0);

// lambda_0(v) = sum over v = m d, d <= V, m <= U of mu(d) mu(m).
i64 lambda0(i64 v, double U, double V);
// lambda_1(u) = sum over d | u, d > V of mu(d).
i64 lambda1(i64 u, double V);

// Verifies mu(n) = -sum_{lmd=n, d<=V, m<=U} mu(d)mu(m)
//               + sum_{lmd=n, d>V, m>U} mu(d)mu(m) for n > max(U,V).
bool vaughan_identity_check(i64 n, double U, double V);

// T_1 = sum_{m ~ M} a(m) sum_{x < mn <= x+y} e((mn)^k alpha).
std::complex<double> type_I_sum(double M, const std::function<std::complex<double>(i64)>& a,
                                double x, double y, int k, const PhaseReal& alpha,
                                i64 budget = kDefaultTermBudget);

// T_2 = sum_{m ~ M} a(m) sum_{x < mn <= x+y} b(n) e((mn)^k alpha).
std::complex<double> type_II_sum(double M, const std::function<std::complex<double>(i64)>& a,
                                 const std::function<std::complex<double>(i64)>& b, double x,
                                 double y, int k, const PhaseReal& alpha,
                                 i64 budget = kDefaultTermBudget);

struct Reconstruction {
    std::complex<double> s1;
    std::complex<double> s2;
    std::complex<double> direct;
    double residual;  // |(-s1 + s2) - direct|
    double bound;     // y * 2^-30
    double U, V;
};

// Evaluates S_1, S_2 and the direct sum S_k, checking S_k = -S_1 + S_2.
Reconstruction reconstruct(double x, double y, int k, const PhaseReal& alpha, double U, double V,
                           i64 budget = kDefaultTermBudget);
Reconstruction reconstruct(double x, double y, int k, const PhaseReal& alpha,
                           const VaughanPlan& plan, i64 budget = kDefaultTermBudget);

// Diagnostic split of S_2 at u = x^{1/2}: s21 sums u >= sqrt(x), s22 sums
// V < u < sqrt(x); s21 + s22 recovers S_2.
struct S2Split {
    std::complex<double> s21;
    std::complex<double> s22;
};
S2Split s2_split(double x, double y, int k, const PhaseReal& alpha, double U, double V,
                 i64 budget = kDefaultTermBudget);

// Power-of-two blocks (M, 2M] tiling (lo, hi]; first and last may be cut.
std::vector<std::pair<double, double>> dyadic_cover(double lo, double hi);

}  // namespace moblab
