#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "moblab/characters.hpp"
#include "moblab/errors.hpp"
#include "moblab/expsum.hpp"
#include "moblab/sieve.hpp"
#include "moblab/sweep.hpp"
#include "oracles.hpp"

using namespace moblab;
using std::complex;

namespace {

// Certifies sum over the count vector of exponent()-th roots of unity in
// integer arithmetic: either everything sits at angle 0 (sum = total) or the
// counts are uniform over a cyclic subgroup of order > 1 (sum = 0).
enum class RootSum { Total, Zero, Other };

RootSum classify_root_counts(const std::vector<u64>& cnt) {
    u64 M = cnt.size();
    u64 total = 0, at_zero = cnt[0];
    for (u64 c : cnt) total += c;
    if (at_zero == total) return RootSum::Total;
    // smallest nonzero angle generates the support
    u64 g = 0;
    for (u64 j = 1; j < M; ++j)
        if (cnt[j]) {
            g = j;
            break;
        }
    if (g == 0 || M % g != 0) return RootSum::Other;
    u64 h = M / g;
    if (h < 2) return RootSum::Other;
    u64 expected = total / h;
    if (expected * h != total) return RootSum::Other;
    for (u64 j = 0; j < M; ++j) {
        bool on = (j % g == 0);
        if (on && cnt[j] != expected) return RootSum::Other;
        if (!on && cnt[j] != 0) return RootSum::Other;
    }
    return RootSum::Zero;
}

u64 phi_naive(u64 n) {
    u64 r = 0;
    for (u64 i = 1; i <= n; ++i)
        if (std::gcd(i, n) == 1) ++r;
    return n == 1 ? 1 : r;
}

}  // namespace

TEST_CASE("small character groups") {
    CharacterTable t1 = CharacterTable::build(1);
    CHECK(t1.size() == 1);
    CHECK(t1.value(0, 0) == complex<double>(1.0, 0.0));
    CHECK(t1.value(0, 12345) == complex<double>(1.0, 0.0));
    CHECK(t1.primitive(0));

    CharacterTable t3 = CharacterTable::build(3);
    REQUIRE(t3.size() == 2);
    CHECK(t3.value(0, 1).real() == doctest::Approx(1.0));
    CHECK(t3.value(0, 2).real() == doctest::Approx(1.0));
    CHECK(t3.value(1, 1).real() == doctest::Approx(1.0));
    CHECK(t3.value(1, 2).real() == doctest::Approx(-1.0));
    CHECK(std::abs(t3.value(1, 3)) == 0.0);
    CHECK(t3.n_primitive() == 1);
    CHECK(!t3.primitive(0));

    CharacterTable t5 = CharacterTable::build(5);
    REQUIRE(t5.size() == 4);
    // the four characters take the four fourth roots of unity at n = 2
    std::vector<complex<double>> vals;
    for (size_t i = 0; i < 4; ++i) vals.push_back(t5.value(i, 2));
    for (complex<double> want :
         {complex<double>(1, 0), complex<double>(0, 1), complex<double>(-1, 0),
          complex<double>(0, -1)}) {
        bool found = false;
        for (auto v : vals) found = found || std::abs(v - want) < 1e-12;
        CHECK(found);
    }
}

TEST_CASE("dlog reconstruction and character counts") {
    for (u64 q = 1; q <= 120; ++q) {
        CharacterTable t = CharacterTable::build(q);
        CHECK(t.phi() == phi_naive(q));
        // dlog tuples rebuild every unit
        for (u64 n = 0; n < q; ++n) {
            if (std::gcd(n, q) != 1) {
                CHECK(!t.is_unit(n));
                continue;
            }
            auto x = t.dlog(n);
            u64 r = 1 % q;
            for (size_t i = 0; i < x.size(); ++i)
                r = mulmod(r, powmod(t.components()[i].generator, x[i], q), q);
            CHECK(r == n % q);
        }
        // principal character is identically 1 on units
        for (u64 n = 0; n < q; ++n)
            if (t.is_unit(n)) CHECK(*t.angle_num(0, n) == 0);
    }
}

TEST_CASE("orthogonality in exact integer arithmetic, q <= 60") {
    for (u64 q = 1; q <= 60; ++q) {
        CharacterTable t = CharacterTable::build(q);
        u64 M = t.exponent();
        // relation 1: sum over chi of chi(m) conj(chi(n))
        for (u64 m = 0; m < q; ++m) {
            if (!t.is_unit(m)) continue;
            for (u64 n = 0; n < q; ++n) {
                if (!t.is_unit(n)) continue;
                std::vector<u64> cnt(M, 0);
                for (size_t chi = 0; chi < t.size(); ++chi) {
                    u64 am = *t.angle_num(chi, m);
                    u64 an = *t.angle_num(chi, n);
                    cnt[(am + M - an) % M]++;
                }
                RootSum rs = classify_root_counts(cnt);
                if (m % q == n % q)
                    CHECK(rs == RootSum::Total);
                else
                    CHECK(rs == RootSum::Zero);
            }
        }
        // relation 2: sum over n of chi(n) conj(psi(n))
        for (size_t chi = 0; chi < t.size(); ++chi) {
            for (size_t psi = 0; psi < t.size(); ++psi) {
                std::vector<u64> cnt(M, 0);
                for (u64 n = 0; n < q; ++n) {
                    if (!t.is_unit(n)) continue;
                    cnt[(*t.angle_num(chi, n) + M - *t.angle_num(psi, n)) % M]++;
                }
                RootSum rs = classify_root_counts(cnt);
                if (chi == psi)
                    CHECK(rs == RootSum::Total);
                else
                    CHECK(rs == RootSum::Zero);
            }
        }
    }
}

TEST_CASE("conductors match brute-force induced-modulus search") {
    for (u64 q = 1; q <= 72; ++q) {
        CharacterTable t = CharacterTable::build(q);
        for (size_t chi = 0; chi < t.size(); ++chi) {
            u64 brute = 0;
            for (u64 d = 1; d <= q; ++d) {
                if (q % d != 0) continue;
                bool trivial_on_kernel = true;
                for (u64 n = 1; n <= q && trivial_on_kernel; n += d)
                    if (std::gcd(n, q) == 1 && *t.angle_num(chi, n) != 0)
                        trivial_on_kernel = false;
                if (trivial_on_kernel) {
                    brute = d;
                    break;
                }
            }
            CHECK(t.conductor(chi) == brute);
        }
    }
}

TEST_CASE("primitive character count identity") {
    for (u64 q = 1; q <= 120; ++q) {
        CharacterTable t = CharacterTable::build(q);
        long expected = 0;
        for (u64 d = 1; d <= q; ++d)
            if (q % d == 0) expected += oracle::mobius_naive(d) * static_cast<long>(phi_naive(q / d));
        CHECK(t.n_primitive() == static_cast<u64>(expected));
    }
}

TEST_CASE("twisted mobius sums") {
    PhaseReal zero = PhaseReal::parse("0");
    CharacterTable t1 = CharacterTable::build(1);
    complex<double> s = twisted_mobius_sum(10, 6, 1, 1, t1, 0, 3, zero);
    CHECK(s.real() == doctest::Approx(0.0).epsilon(1e-13));  // mu(11)+...+mu(16)

    CharacterTable t2 = CharacterTable::build(2);
    s = twisted_mobius_sum(10, 6, 2, 1, t2, 0, 3, zero);
    CHECK(s.real() == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::fabs(s.imag()) < 1e-13);

    // lambda = 0 and a principal character keep the sum real
    for (u64 q : {3, 4, 5, 12}) {
        CharacterTable t = CharacterTable::build(q);
        complex<double> v = twisted_mobius_sum(50, 40, q, 1, t, 0, 3, zero);
        CHECK(std::fabs(v.imag()) < 1e-12);
    }

    CHECK_THROWS_AS(twisted_mobius_sum(10, 6, 4, 3, t2, 0, 3, zero), ArgumentError);
}

TEST_CASE("lemma31 rhs hand enumerations") {
    PhaseReal zero = PhaseReal::parse("0");
    // q = 1 reduces to |S_k|
    ArithSegment seg = sieve_segment(100, 60, unsigned(ArithFn::Mu));
    double rhs = lemma31_rhs(100, 60, 3, 1, 0, zero, 0.01);
    double lhs = std::abs(mobius_expsum(100, 60, 3, zero, seg).sum);
    CHECK(rhs == doctest::Approx(lhs).epsilon(1e-12));

    // q = 2 at x=10, y=6: d=1 has no primitive character mod 2, d=2 gives
    // |mu(7)| = 1 over m in (5, 8] with gcd(m,2)=1
    std::vector<Lemma31Term> terms;
    double v = lemma31_rhs(10, 6, 3, 2, 1, zero, 0.01, &terms);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].d == 1);
    CHECK(terms[0].argmax_chi == -1);
    CHECK(terms[0].max_abs == 0.0);
    CHECK(terms[1].d == 2);
    CHECK(terms[1].max_abs == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(v == doctest::Approx(std::pow(2.0, 2.0 / 3.0 + 0.01)).epsilon(1e-12));

    // q = 4: enumerate divisors by hand with oracle weights
    PhaseReal lam = PhaseReal::parse("1/100");
    double got = lemma31_rhs(30, 20, 3, 4, 1, lam, 0.01, &terms);
    // d = 1: primitive character mod 4 is the order-2 character with
    // chi(1)=1, chi(3)=-1
    auto hand_term = [&](u64 d) {
        complex<double> acc = 0;
        for (u64 m = 30 / d + 1; m <= 50 / d; ++m) {
            if (std::gcd(m, u64(4)) != 1) continue;
            int mu = oracle::mobius_naive(m);
            if (mu == 0) continue;
            double chi = 1.0;
            if (d == 1) chi = (m % 4 == 1) ? 1.0 : -1.0;
            // phase: m^3 d^3 / 100 exact rational
            mpz_class ph = mpz_class(static_cast<unsigned long>(m));
            ph = ph * ph * ph;
            ph *= static_cast<unsigned long>(d * d * d);
            mpz_class r = ph % 100;
            acc += mu * chi * oracle::e_of(r.get_d() / 100.0);
        }
        return std::abs(acc);
    };
    double expect = std::pow(4.0, 2.0 / 3.0 + 0.01) * (hand_term(1) + 0.0 + hand_term(4));
    CHECK(got == doctest::Approx(expect).epsilon(1e-11));

    CHECK_THROWS_AS(lemma31_rhs(10, 6, 3, 4, 2, zero, 0.01), ArgumentError);
}

TEST_CASE("lemma31 dominance constant does not regress") {
    std::ifstream in(std::string(MOBLAB_REPO_DIR) + "/baselines.json");
    REQUIRE_MESSAGE(in.good(), "baselines.json missing; run make_baselines");
    nlohmann::json j;
    in >> j;
    double base = j.at("lemma31_dominance_max").get<double>();
    double got = lemma31_dominance_scan(50);
    CHECK(got <= base * (1 + 1e-9));
    CHECK(got == doctest::Approx(base).epsilon(1e-9));  // deterministic rerun
}
