#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "moblab/expsum.hpp"
#include "moblab/int_util.hpp"
#include "moblab/phase.hpp"

namespace moblab {

struct UnitComponent {
    u64 generator;  // residue mod q, lifted through the CRT
    u64 order;
};

// The group of Dirichlet characters mod q. Characters are exponent tuples
// over the unit-group generators; values are roots of unity materialized on
// demand, so orthogonality checks can run in integer arithmetic.
class CharacterTable {
  public:
    static CharacterTable build(u64 q);

    u64 modulus() const { return q_; }
    u64 phi() const { return phi_; }
    size_t size() const { return static_cast<size_t>(phi_); }
    u64 exponent() const { return exponent_; }  // lcm of component orders
    const std::vector<UnitComponent>& components() const { return comps_; }

    // character index -> exponent tuple, mixed-radix over component orders;
    // index 0 is the principal character
    std::vector<u64> char_tuple(size_t chi) const;

    bool is_unit(u64 n) const { return is_unit_[n % q_] != 0; }
    // r with chi(n) = e(r / exponent()); nullopt when gcd(n,q) > 1
    std::optional<u64> angle_num(size_t chi, u64 n) const;
    std::complex<double> value(size_t chi, u64 n) const;

    u64 conductor(size_t chi) const { return conductors_[chi]; }
    bool primitive(size_t chi) const { return conductors_[chi] == q_; }
    u64 n_primitive() const;

    // discrete log of a unit over the generators (component exponents)
    std::vector<u64> dlog(u64 n) const;

  private:
    u64 q_ = 1, phi_ = 1, exponent_ = 1;
    std::vector<UnitComponent> comps_;
    std::vector<std::uint8_t> is_unit_;
    std::vector<std::uint32_t> dlog_;  // flattened q x ncomp
    std::vector<u64> conductors_;
    std::vector<std::complex<double>> roots_;  // exponent()-th roots of unity
};

// S_k(chi) for the divisor d of q: the sum of mu(m) chi(m) e(m^k d^k lambda)
// over x/d < m <= (x+y)/d restricted to gcd(m, q) = 1.
std::complex<double> twisted_mobius_sum(double x, double y, u64 q, u64 d,
                                        const CharacterTable& table, size_t chi, int k,
                                        const PhaseReal& lambda,
                                        i64 budget = kDefaultTermBudget);

struct Lemma31Term {
    u64 d;
    u64 l;  // q/d
    double max_abs;
    long argmax_chi;  // -1 when no primitive character mod l exists
};

// q^{eta_k+eps} * sum over d|q of the largest |S_k(chi)| over primitive
// characters mod q/d, with eta_k = 1 - 1/k.
double lemma31_rhs(double x, double y, int k, u64 q, i64 a, const PhaseReal& lambda, double eps,
                   std::vector<Lemma31Term>* terms = nullptr, i64 budget = kDefaultTermBudget);

}  // namespace moblab
