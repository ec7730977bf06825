#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "moblab/errors.hpp"
#include "moblab/mpreal.hpp"
#include "moblab/vaughan.hpp"
#include "oracles.hpp"

using namespace moblab;
using std::complex;

TEST_CASE("plan parameters as exact rationals") {
    VaughanPlan p = make_plan(1e6, mpq_class(1), 3);
    CHECK(p.sigma_k == mpq_class(1, 12));
    CHECK(p.gamma == mpq_class(4));
    CHECK(p.rho == mpq_class(1, 768));
    CHECK(p.c1 == 32.0);  // 8(k+1)
    // U = x^{1/2 - 1/768}, V = x^{1/384}
    double expU = std::exp(std::log(1e6) * (0.5 - 1.0 / 768.0));
    double expV = std::exp(std::log(1e6) * (1.0 / 384.0));
    CHECK(p.U == doctest::Approx(expU).epsilon(1e-12));
    CHECK(p.V == doctest::Approx(expV).epsilon(1e-12));
    for (const auto& c : p.checks) CHECK(c.ok);

    VaughanPlan p2 = make_plan(1e6, mpq_class(4, 5), 3);
    CHECK(p2.gamma == mpq_class(20));
    CHECK(p2.rho == mpq_class(1, 3840));

    CHECK_THROWS_WITH_AS(make_plan(1e6, mpq_class(3, 4), 3), "theta must exceed 3/4",
                         ParameterError);
    CHECK_THROWS_AS(make_plan(1e6, mpq_class(7, 10), 3), ParameterError);
    CHECK_THROWS_AS(make_plan(1e6, mpq_class(11, 10), 3), ParameterError);
}

TEST_CASE("plan monotonicity toward theta = 3/4") {
    mpq_class prev_gamma = 0, prev_rho = 10;
    for (mpq_class theta : {mpq_class(19, 20), mpq_class(9, 10), mpq_class(17, 20),
                            mpq_class(4, 5), mpq_class(31, 40)}) {
        VaughanPlan p = make_plan(1e8, theta, 3);
        CHECK(p.gamma > prev_gamma);  // gamma grows as theta drops toward 3/4
        CHECK(p.rho < prev_rho);
        CHECK(p.rho > 0);
        prev_gamma = p.gamma;
        prev_rho = p.rho;
    }
}

TEST_CASE("lambda coefficients") {
    CHECK(lambda0(1, 5, 5) == 1);
    CHECK(lambda0(6, 2, 3) == 1);   // only (d,m) = (3,2)
    CHECK(lambda0(4, 2, 2) == 1);   // only (2,2)
    CHECK(lambda1(7, 5.0) == -1);   // prime above V
    CHECK(lambda1(6, 1.0) == -1);   // mu(2)+mu(3)+mu(6)
    CHECK(lambda1(6, 6.0) == 0);

    // |lambda_0| <= tau, |lambda_1| <= tau, exhaustively to 1e5
    for (i64 v = 1; v <= 100000; ++v) {
        i64 t = static_cast<i64>(oracle::tau_naive(static_cast<u64>(v)));
        CHECK(std::llabs(lambda0(v, 37.0, 11.0)) <= t);
        CHECK(std::llabs(lambda1(v, 11.0)) <= t);
    }
}

TEST_CASE("vaughan identity holds exactly") {
    CHECK(vaughan_identity_check(5, 2, 2));
    CHECK(vaughan_identity_check(7, 1, 1));
    for (double U : {1.0, 2.0, 5.0, 10.0, 30.0})
        for (double V : {1.0, 2.0, 5.0, 10.0, 30.0})
            for (i64 n = static_cast<i64>(std::max(U, V)) + 1; n <= 2000; ++n)
                CHECK(vaughan_identity_check(n, U, V));
    CHECK_THROWS_AS(vaughan_identity_check(5, 6.0, 1.0), ParameterError);
}

TEST_CASE("type I and II sums against naive loops") {
    auto one = [](i64) { return complex<double>(1.0, 0.0); };
    // m ~ 1 means m = 2 only
    complex<double> t = type_I_sum(1.0, one, 10, 6, 3, PhaseReal::parse("0"));
    CHECK(t.real() == doctest::Approx(3.0).epsilon(1e-14));

    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        double M = 1.0 + static_cast<double>(rng() % 8);
        double x = 50.0 + static_cast<double>(rng() % 150);
        double y = 10.0 + static_cast<double>(rng() % 40);
        PhaseReal alpha = PhaseReal::from_fraction(rng() % 29, 29);
        auto a = [](i64 m) { return complex<double>(1.0 / m, 0.25); };
        auto b = [](i64 n) { return complex<double>(0.5, static_cast<double>(n % 3) - 1.0); };

        complex<double> got1 = type_I_sum(M, a, x, y, 3, alpha);
        complex<double> got2 = type_II_sum(M, a, b, x, y, 3, alpha);
        complex<double> want1 = 0, want2 = 0;
        for (i64 m = static_cast<i64>(M) + 1; m <= static_cast<i64>(2 * M); ++m) {
            if (!(m > M && m <= 2 * M)) continue;
            for (i64 n = 1; m * n <= x + y; ++n) {
                if (!(m * n > x)) continue;
                mpz_class p;
                mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m * n), 3);
                mpz_class r = (p * alpha.exact_value().get_num()) % alpha.exact_value().get_den();
                double frac = r.get_d() / alpha.exact_value().get_den().get_d();
                want1 += a(m) * oracle::e_of(frac);
                want2 += a(m) * b(n) * oracle::e_of(frac);
            }
        }
        CHECK(std::abs(got1 - want1) <= 1e-9);
        CHECK(std::abs(got2 - want2) <= 1e-9);

        complex<double> asI = type_II_sum(M, a, one, x, y, 3, alpha);
        CHECK(std::abs(asI - got1) <= 1e-12);
    }

    // a = b = 1, alpha = 0 counts lattice points
    complex<double> latt = type_II_sum(3.0, one, one, 30, 20, 3, PhaseReal::parse("0"));
    i64 count = 0;
    for (i64 m = 4; m <= 6; ++m)
        for (i64 n = 1; m * n <= 50; ++n)
            if (m * n > 30) ++count;
    CHECK(latt.real() == doctest::Approx(static_cast<double>(count)).epsilon(1e-13));
}

TEST_CASE("reconstruction identity at manual U, V") {
    // integer identity at alpha = 0
    Reconstruction r = reconstruct(1000, 100, 3, PhaseReal::parse("0"), 5.0, 5.0);
    CHECK(r.residual <= 1e-9);
    CHECK(std::abs(-r.s1 + r.s2 - r.direct) == r.residual);

    // U = V = 1 keeps the identity exact for any alpha
    for (const char* s : {"1/7", "0.137", "0"}) {
        Reconstruction rr = reconstruct(100, 50, 3, PhaseReal::parse(s), 1.0, 1.0);
        CHECK(rr.residual <= 50 * std::ldexp(1.0, -30));
    }

    CHECK_THROWS_AS(reconstruct(10, 5, 3, PhaseReal::parse("0"), 20.0, 1.0), ParameterError);
}

TEST_CASE("reconstruction with a real plan") {
    VaughanPlan plan = make_plan(1e4, mpq_class(17, 20), 3);
    MpReal s5 = MpReal::of(5.0, 256).sqrt();
    PhaseReal golden =
        PhaseReal::from_real((s5 - MpReal::of(1.0, 256)) / MpReal::of(2.0, 256), 192);
    i64 y = to_i64(MpReal::of(1e4, 128).pow(mpq_class(17, 20)).floor_mpz());
    Reconstruction r = reconstruct(1e4, static_cast<double>(y), 3, golden, plan);
    CHECK(r.residual <= static_cast<double>(y) * std::ldexp(1.0, -30));
}

TEST_CASE("s2 split recovers S2 across the sqrt(x) boundary") {
    double x = 5000, y = 800, U = 9, V = 3;
    PhaseReal alpha = PhaseReal::parse("2/9");
    Reconstruction r = reconstruct(x, y, 3, alpha, U, V);
    S2Split sp = s2_split(x, y, 3, alpha, U, V);
    CHECK(std::abs(sp.s21 + sp.s22 - r.s2) <= 1e-9);

    // naive split: double loop over (u, m) pairs with the same thresholds
    complex<double> naive21 = 0, naive22 = 0;
    for (i64 u = static_cast<i64>(V) + 1; u * (static_cast<i64>(U) + 1) <= 5800; ++u) {
        i64 l1 = lambda1(u, V);
        if (l1 == 0) continue;
        complex<double> inner = 0;
        for (i64 m = static_cast<i64>(U) + 1; m * u <= 5800; ++m) {
            if (m * u <= 5000) continue;
            int mu = oracle::mobius_naive(static_cast<u64>(m));
            if (mu == 0) continue;
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m * u), 3);
            mpz_class rphase = (p * 2) % 9;
            inner += static_cast<double>(mu) * oracle::e_of(rphase.get_d() / 9.0);
        }
        if (u * u >= 5000)
            naive21 += static_cast<double>(l1) * inner;
        else
            naive22 += static_cast<double>(l1) * inner;
    }
    CHECK(std::abs(sp.s21 - naive21) <= 1e-8);
    CHECK(std::abs(sp.s22 - naive22) <= 1e-8);
}

TEST_CASE("dyadic cover tiles exactly") {
    auto c = dyadic_cover(1.0, 8.0);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == std::make_pair(1.0, 2.0));
    CHECK(c[1] == std::make_pair(2.0, 4.0));
    CHECK(c[2] == std::make_pair(4.0, 8.0));

    auto t = dyadic_cover(3.0, 5.0);
    REQUIRE(t.size() == 2);
    CHECK(t[0] == std::make_pair(3.0, 4.0));
    CHECK(t[1] == std::make_pair(4.0, 5.0));

    std::mt19937_64 rng(91);
    for (int rep = 0; rep < 50; ++rep) {
        double lo = 0.5 + static_cast<double>(rng() % 10000) / 7.0;
        double hi = lo + 0.25 + static_cast<double>(rng() % 10000) / 3.0;
        auto cover = dyadic_cover(lo, hi);
        REQUIRE(!cover.empty());
        CHECK(cover.front().first == lo);
        CHECK(cover.back().second == hi);
        for (size_t i = 0; i < cover.size(); ++i) {
            CHECK(cover[i].first < cover[i].second);
            CHECK(cover[i].second <= 2 * cover[i].first);
            if (i) CHECK(cover[i].first == cover[i - 1].second);
        }
    }

    CHECK_THROWS_AS(dyadic_cover(0.0, 4.0), ArgumentError);
    CHECK_THROWS_AS(dyadic_cover(5.0, 5.0), ArgumentError);
}

TEST_CASE("plan from (x, y) recovers theta = 1 exactly") {
    VaughanPlan p = make_plan_xy(1e6, 1e6, 3);
    CHECK(p.theta == mpq_class(1));
    CHECK(p.y == 1e6);
}
