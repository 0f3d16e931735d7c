#include "bj/correlogram.hpp"
#include "bj/errors.hpp"
#include "bj/simulate.hpp"
#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace bj;
using Catch::Matchers::WithinAbs;

TEST_CASE("acf of a short ramp") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    const CorrelogramResult r = acf(x, 2);
    CHECK(r.at_lag(0) == 1.0);
    CHECK_THAT(r.at_lag(1), WithinAbs(0.4, 1e-15));
    CHECK_THAT(r.at_lag(2), WithinAbs(-0.1, 1e-15));
}

TEST_CASE("acf and pacf match reference values") {
    const std::vector<double> ref_acf = {
        0.37698727963358813,  -0.022788885727360396, 0.052079237165850084, 0.24528646883477553,
        0.018260190146637403, -0.2059998642681037,   -0.09011138388802152, -0.07346793688012139,
        -0.21452091193354472, -0.09020418668761084};
    const std::vector<double> ref_pacf = {
        0.37698727963358813,  -0.19222756227848636, 0.1631473086793343,  0.1898677449656094,
        -0.19455067130341733, -0.11724211620813356, 0.03829743138322275, -0.18783903306167027,
        -0.12540755231675582, 0.18919370378668784};
    const CorrelogramResult a = acf(testing::kSample, 10);
    const CorrelogramResult p = pacf(testing::kSample, 10);
    REQUIRE(a.max_lag() == 10);
    for (std::size_t k = 1; k <= 10; ++k) {
        CHECK_THAT(a.at_lag(k), WithinAbs(ref_acf[k - 1], 1e-12));
        CHECK_THAT(p.at_lag(k), WithinAbs(ref_pacf[k - 1], 1e-10));
    }
    CHECK(p.at_lag(1) == a.at_lag(1));
}

TEST_CASE("white noise stays inside 3/sqrt(N)") {
    NormalStream noise(5);
    std::vector<double> x(1000);
    for (double& v : x) v = noise.next();
    const CorrelogramResult r = acf(x, 20);
    int inside = 0;
    for (std::size_t k = 1; k <= 20; ++k) {
        if (std::fabs(r.at_lag(k)) < 3.0 / std::sqrt(1000.0)) ++inside;
    }
    CHECK(inside >= 19);
}

TEST_CASE("pacf of an AR(1) cuts off after lag 1") {
    NormalStream noise(6);
    std::vector<double> x(2000);
    double prev = 0.0;
    for (int t = -200; t < 2000; ++t) {
        prev = 0.6 * prev + noise.next();
        if (t >= 0) x[static_cast<std::size_t>(t)] = prev;
    }
    const CorrelogramResult p = pacf(x, 20);
    CHECK_THAT(p.at_lag(1), WithinAbs(0.6, 0.05));
    for (std::size_t k = 2; k <= 20; ++k) CHECK(std::fabs(p.at_lag(k)) < 3.0 / std::sqrt(2000.0));
}

TEST_CASE("white-noise bound") {
    CHECK_THAT(white_noise_bound(100), WithinAbs(0.1959964, 1e-7));
    CHECK_THAT(white_noise_bound(400), WithinAbs(white_noise_bound(100) / 2.0, 1e-15));
    CHECK_THAT(white_noise_bound(100, 0.3173), WithinAbs(0.1, 1e-5));
    CHECK_THROWS_AS(white_noise_bound(100, 0.0), DataError);
    CHECK_THROWS_AS(white_noise_bound(0), DataError);
}

TEST_CASE("correlogram bound and exceedances") {
    const CorrelogramResult a = acf(testing::kSample, 10);
    CHECK_THAT(a.bound, WithinAbs(white_noise_bound(60), 1e-15));
    std::size_t count = 0;
    for (double v : a.values) count += std::fabs(v) > a.bound;
    CHECK(a.exceedances() == count);
    CHECK(count == 1);
}

TEST_CASE("correlogram argument checks") {
    const std::vector<double> constant(10, 3.0);
    CHECK_THROWS_AS(acf(constant, 3), DataError);
    CHECK_THROWS_AS(acf(testing::kSample, 60), DataError);
    CHECK_THROWS_AS(pacf(testing::kSample, 0), DataError);
    CHECK(default_max_lag(96) == 19);
    CHECK(default_max_lag(5) == 4);
}
