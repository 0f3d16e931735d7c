#include "bj/errors.hpp"
#include "bj/simulate.hpp"
#include "bj/stationarity.hpp"
#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

using namespace bj;
using Catch::Matchers::WithinAbs;

TEST_CASE("ADF statistic matches a reference regression") {
    const AdfResult r = adf_test(testing::kSample);
    CHECK(r.lag_order == 3);
    CHECK_THAT(r.statistic, WithinAbs(-2.7583883378450262, 1e-9));
}

TEST_CASE("ADF p-value interpolation in the trend table") {
    bool clamped = true;
    CHECK_THAT(adf_p_value(-3.45, 100, &clamped), WithinAbs(0.05, 1e-12));
    CHECK_FALSE(clamped);
    CHECK_THAT(adf_p_value(-3.30, 100), WithinAbs(0.075, 1e-12));
    CHECK_THAT(adf_p_value(-3.60, 25), WithinAbs(0.05, 1e-12));
    CHECK_THAT(adf_p_value(-3.41, 1e6), WithinAbs(0.05, 1e-12));
    CHECK(adf_p_value(-6.0, 100, &clamped) == 0.01);
    CHECK(clamped);
    CHECK(adf_p_value(1.0, 100, &clamped) == 0.99);
    CHECK(clamped);
    double previous = 0.0;
    for (double stat = -5.0; stat < 1.0; stat += 0.05) {
        const double p = adf_p_value(stat, 83);
        CHECK(p >= previous);
        previous = p;
    }
}

TEST_CASE("ADF size and power") {
    NormalStream noise(123);
    int walks_retained = 0, noise_rejected = 0;
    std::vector<double> x(500);
    for (int rep = 0; rep < 500; ++rep) {
        double level = 0.0;
        for (double& v : x) v = level += noise.next();
        walks_retained += adf_test(x).p_value > 0.05;
        for (double& v : x) v = noise.next();
        noise_rejected += adf_test(x).p_value < 0.05;
    }
    CHECK(walks_retained >= 450);
    CHECK(noise_rejected >= 450);
}

TEST_CASE("ADF treats a noisy ramp as trend-stationary") {
    NormalStream noise(124);
    std::vector<double> x(200);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = static_cast<double>(t + 1) + 0.5 * noise.next();
    const AdfResult r = adf_test(x);
    CHECK(r.reject_unit_root_at_05);
}

TEST_CASE("ADF argument checks") {
    const std::vector<double> tiny = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(adf_test(tiny), DataError);
    CHECK_THROWS_AS(adf_test(testing::kSample, -1), DataError);
}
