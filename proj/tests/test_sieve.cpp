#include <doctest.h>

#include <cmath>
#include <random>

#include "moblab/errors.hpp"
#include "moblab/sieve.hpp"
#include "oracles.hpp"

using namespace moblab;

namespace {
constexpr unsigned kAll =
    unsigned(ArithFn::Mu) | unsigned(ArithFn::Lambda) | unsigned(ArithFn::Tau);
}

TEST_CASE("sieve segment fixed values") {
    ArithSegment seg = sieve_segment(10, 6, kAll);
    int mu_want[] = {-1, 0, -1, 1, 1, 0};
    for (int i = 0; i < 6; ++i) CHECK(seg.mu[i] == mu_want[i]);
    CHECK(seg.lambda_at(11) == doctest::Approx(std::log(11.0)));
    CHECK(seg.lambda_at(12) == 0.0);
    CHECK(seg.lambda_at(13) == doctest::Approx(std::log(13.0)));
    CHECK(seg.lambda_at(14) == 0.0);
    CHECK(seg.lambda_at(15) == 0.0);
    CHECK(seg.lambda_at(16) == doctest::Approx(std::log(2.0)));

    ArithSegment first = sieve_segment(0, 4, kAll);
    int mu_first[] = {1, -1, -1, 0};
    u64 tau_first[] = {1, 2, 2, 3};
    for (int i = 0; i < 4; ++i) {
        CHECK(first.mu[i] == mu_first[i]);
        CHECK(first.tau[i] == tau_first[i]);
    }
}

TEST_CASE("divisor power sums") {
    CHECK(divisor_power_sum(0, 4, 1) == 8.0);
    CHECK(divisor_power_sum(0, 4, 2) == 18.0);
    double expect = 0;
    for (u64 n = 101; n <= 150; ++n) {
        double t = static_cast<double>(oracle::tau_naive(n));
        expect += t * t;
    }
    CHECK(divisor_power_sum(100, 50, 2) == expect);
}

TEST_CASE("sieve agrees with per-n trial division on random segments") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 30; ++rep) {
        u64 x = rng() % 1000000;
        u64 y = rng() % 1000 + 1;
        ArithSegment seg = sieve_segment(x, y, kAll);
        for (u64 n = x + 1; n <= x + y; ++n) {
            CAPTURE(n);
            CHECK(seg.mu_at(n) == oracle::mobius_naive(n));
            CHECK(seg.tau_at(n) == oracle::tau_naive(n));
            CHECK(seg.lambda_at(n) == doctest::Approx(oracle::lambda_naive(n)).epsilon(1e-14));
        }
    }
}

TEST_CASE("Mertens sums stitched from segments match a monolithic sieve") {
    const u64 N = 100000;
    ArithSegment whole = sieve_segment(0, N, unsigned(ArithFn::Mu));
    long whole_sum = 0;
    for (u64 n = 1; n <= N; ++n) whole_sum += whole.mu_at(n);

    long stitched = 0;
    u64 pos = 0;
    std::mt19937_64 rng(55);
    while (pos < N) {
        u64 len = std::min<u64>(N - pos, rng() % 997 + 1);
        ArithSegment part = sieve_segment(pos, len, unsigned(ArithFn::Mu));
        for (u64 n = pos + 1; n <= pos + len; ++n) stitched += part.mu_at(n);
        pos += len;
    }
    CHECK(stitched == whole_sum);
}

TEST_CASE("square-free density near 6/pi^2") {
    ArithSegment seg = sieve_segment(0, 1000000, unsigned(ArithFn::Mu));
    i64 nonzero = 0;
    for (auto m : seg.mu)
        if (m != 0) ++nonzero;
    double density = static_cast<double>(nonzero) / 1e6;
    CHECK(std::fabs(density - 0.6079271018540267) <= 0.002);
}

TEST_CASE("segment budget errors") {
    CHECK_THROWS_AS(sieve_segment(0, 101, unsigned(ArithFn::Mu), 100), ResourceError);
    CHECK_THROWS_AS(sieve_segment(0, 0, unsigned(ArithFn::Mu)), ArgumentError);
}
