#include "bj/errors.hpp"
#include "bj/forecasting.hpp"
#include "bj/sarima.hpp"
#include "bj/simulate.hpp"
#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace bj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("mean-only model forecasts its constant") {
    const FitResult f = fit({0, 0, 0, 0, 0, 0, 12, true}, TimeSeries({2012, 1}, testing::kSample));
    const ForecastResult r = forecast(f, 6);
    CHECK(r.start == YearMonth{2017, 1});
    for (int j = 0; j < 6; ++j) {
        const auto k = static_cast<std::size_t>(j);
        CHECK_THAT(r.point[k], WithinAbs(*f.params.constant, 1e-12));
        CHECK_THAT(r.variance[k], WithinRel(f.params.sigma2, 1e-12));
        CHECK_THAT(r.upper[k] - r.point[k], WithinRel(1.959963984540054 * std::sqrt(f.params.sigma2), 1e-9));
    }
}

TEST_CASE("AR(1) forecasts decay geometrically") {
    SarimaParams p;
    p.ar = {0.5};
    p.sigma2 = 2.0;
    const SarimaSpec s{1, 0, 0, 0, 0, 0, 12, false};
    const FitResult f = evaluate(s, p, TimeSeries({2012, 1}, {1.0, -3.0, 2.0, 4.0}));
    ForecastOptions o;
    o.clamp_nonnegative = false;
    const ForecastResult r = forecast(f, 8, o);
    double cumulative = 0.0;
    for (int j = 0; j < 8; ++j) {
        const auto k = static_cast<std::size_t>(j);
        CHECK_THAT(r.point[k], WithinAbs(4.0 * std::pow(0.5, j + 1), 1e-14));
        cumulative += std::pow(0.25, j);
        CHECK_THAT(r.variance[k], WithinRel(f.params.sigma2 * cumulative, 1e-12));
    }
}

TEST_CASE("random walk intervals widen with the square root of the horizon") {
    SarimaParams p;
    p.ma = {0.0};
    p.sigma2 = 1.0;
    const FitResult f = evaluate({0, 1, 1, 0, 0, 0, 12, false}, p, TimeSeries({2012, 1}, {5.0, 6.0, 7.0, 9.0}));
    const ForecastResult r = forecast(f, 5);
    for (int j = 0; j < 5; ++j) {
        const auto k = static_cast<std::size_t>(j);
        CHECK_THAT(r.point[k], WithinAbs(9.0, 1e-12));
        CHECK_THAT(r.variance[k], WithinRel(f.params.sigma2 * (j + 1.0), 1e-12));
        CHECK(r.psi_weights[k] == 1.0);
    }
}

TEST_CASE("interval widths never shrink") {
    const SarimaSpec s{1, 1, 1, 1, 0, 1, 12, false};
    SimulationConfig c;
    c.spec = s;
    c.params.ar = {0.3};
    c.params.ma = {-0.5};
    c.params.sar = {0.6};
    c.params.sma = {-0.3};
    c.params.sigma2 = 0.01;
    c.n = 120;
    c.seed = 42;
    TimeSeries y = simulate(c);
    std::vector<double> level;
    for (double v : y.values()) level.push_back(std::exp(8.0 + v));
    const TimeSeries logged = boxcox(TimeSeries(y.start(), level), 0.0);
    const FitResult f = fit(s, logged);
    REQUIRE(f.converged);
    const ForecastResult r = forecast(f, 24);
    for (std::size_t k = 1; k < 24; ++k) {
        CHECK(r.transformed_upper[k] - r.transformed_lower[k] >=
              r.transformed_upper[k - 1] - r.transformed_lower[k - 1] - 1e-12);
        CHECK(r.variance[k] >= r.variance[k - 1]);
    }
    for (std::size_t k = 0; k < 24; ++k) {
        CHECK_THAT(r.point[k], WithinRel(std::exp(r.transformed_point[k]), 1e-12));
        CHECK(r.lower[k] < r.point[k]);
        CHECK(r.point[k] < r.upper[k]);
    }
    ForecastOptions mean;
    mean.bias_adjust = true;
    const ForecastResult adjusted = forecast(f, 24, mean);
    for (std::size_t k = 0; k < 24; ++k) {
        CHECK_THAT(adjusted.point[k], WithinRel(r.point[k] * (1.0 + r.variance[k] / 2.0), 1e-9));
    }
}

TEST_CASE("forecast argument checks") {
    FitResult f = fit({0, 0, 0, 0, 0, 0, 12, true}, TimeSeries({2012, 1}, testing::kSample));
    CHECK_THROWS_AS(forecast(f, 0), DataError);
    ForecastOptions o;
    o.level = 1.0;
    CHECK_THROWS_AS(forecast(f, 3, o), DataError);
    f.converged = false;
    CHECK_THROWS_AS(forecast(f, 3), NumericalError);
}

TEST_CASE("root mean squared error") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(rmse(a, a).rmse == 0.0);
    const AccuracyResult r = rmse(std::vector<double>{3.0, 4.0}, std::vector<double>{0.0, 0.0});
    CHECK_THAT(r.rmse, WithinAbs(std::sqrt(12.5), 1e-15));
    CHECK(r.n == 2);
    CHECK_THROWS_AS(rmse(a, std::vector<double>{1.0}), DataError);
    CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), DataError);
}
