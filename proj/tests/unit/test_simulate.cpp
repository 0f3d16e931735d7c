#include "bj/correlogram.hpp"
#include "bj/errors.hpp"
#include "bj/simulate.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

using namespace bj;
using Catch::Matchers::WithinAbs;

TEST_CASE("white noise has unit variance") {
    SimulationConfig c;
    c.spec.include_constant = true;
    c.params.constant = 0.0;
    c.n = 10000;
    const TimeSeries y = simulate(c);
    const auto& v = y.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 10000.0;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean) / 10000.0;
    CHECK(std::fabs(mean) < 0.05);
    CHECK_THAT(var, WithinAbs(1.0, 0.05));
}

TEST_CASE("AR(1) path has the expected autocorrelation") {
    SimulationConfig c;
    c.spec = {1, 0, 0, 0, 0, 0, 12, false};
    c.params.ar = {0.5};
    c.n = 10000;
    c.seed = 77;
    CHECK_THAT(acf(simulate(c), 1).values[0], WithinAbs(0.5, 0.03));
}

TEST_CASE("zero innovation variance gives a flat path") {
    SimulationConfig c;
    c.spec = {1, 1, 1, 1, 1, 1, 12, false};
    c.params.ar = {0.5};
    c.params.ma = {0.2};
    c.params.sar = {0.3};
    c.params.sma = {0.1};
    c.params.sigma2 = 0.0;
    const TimeSeries y = simulate(c);
    for (double v : y.values()) CHECK(v == 0.0);
}

TEST_CASE("simulation is reproducible per seed") {
    SimulationConfig c;
    c.spec = {1, 1, 0, 0, 1, 1, 12, false};
    c.params.ar = {0.4};
    c.params.sma = {-0.5};
    c.start = {2010, 3};
    const TimeSeries a = simulate(c);
    CHECK(a == simulate(c));
    CHECK(a.start() == YearMonth{2010, 3});
    CHECK(a.size() == 100);
    c.seed = 2;
    CHECK_FALSE(a == simulate(c));

    NormalStream s1(9), s2(9);
    for (int i = 0; i < 10; ++i) CHECK(s1.next() == s2.next());
}

TEST_CASE("simulation argument checks") {
    SimulationConfig c;
    c.spec = {1, 0, 0, 0, 0, 0, 12, false};
    c.params.ar = {1.0};
    CHECK_THROWS_AS(simulate(c), NumericalError);
    c.params.ar = {0.5};
    c.params.sigma2 = -1.0;
    CHECK_THROWS_AS(simulate(c), DataError);
    c.params.sigma2 = 1.0;
    c.n = 0;
    CHECK_THROWS_AS(simulate(c), DataError);
    c.n = 10;
    c.burn_in = 5;
    CHECK_THROWS_AS(simulate(c), DataError);
}
