#include "bj/earnings.hpp"
#include "bj/errors.hpp"

#include <catch_amalgamated.hpp>

using namespace bj;

namespace {

ForecastResult flat(YearMonth start, int horizon, double value) {
    ForecastResult f;
    f.start = start;
    f.horizon = horizon;
    f.point.assign(static_cast<std::size_t>(horizon), value);
    return f;
}

}  // namespace

TEST_CASE("loss per month is arrivals times spend times nights") {
    const EarningsProjection p = project_loss(flat({2020, 1}, 12, 500000.0), EarningsAssumptions{});
    CHECK(p.nights == 7.0);
    REQUIRE(p.months.size() == 4);
    CHECK(p.months.front() == YearMonth{2020, 4});
    CHECK(p.months.back() == YearMonth{2020, 7});
    for (double loss : p.monthly_loss) CHECK(loss == 29483930000.0);
    CHECK(p.total_loss == 4.0 * 29483930000.0);
}

TEST_CASE("unrounded stay and linearity") {
    EarningsAssumptions a;
    a.round_alos = false;
    const EarningsProjection one = project_loss(flat({2020, 1}, 12, 1000.0), a);
    const EarningsProjection two = project_loss(flat({2020, 1}, 12, 2000.0), a);
    CHECK(one.nights == 7.11);
    CHECK_THAT(two.total_loss, Catch::Matchers::WithinRel(2.0 * one.total_loss, 1e-15));
}

TEST_CASE("window additivity") {
    const ForecastResult f = flat({2020, 1}, 12, 12345.0);
    EarningsAssumptions whole, head, tail;
    whole.window_start = head.window_start = {2020, 2};
    whole.window_end = tail.window_end = {2020, 10};
    head.window_end = {2020, 5};
    tail.window_start = {2020, 6};
    CHECK_THAT(project_loss(f, whole).total_loss,
               Catch::Matchers::WithinRel(project_loss(f, head).total_loss + project_loss(f, tail).total_loss, 1e-15));
}

TEST_CASE("earnings argument checks") {
    EarningsAssumptions a;
    a.ade = 0.0;
    CHECK_THROWS_AS(a.validate(), DataError);
    a = {};
    a.alos = 0.4;
    CHECK_THROWS_AS(a.validate(), DataError);
    a = {};
    a.window_start = {2020, 8};
    CHECK_THROWS_AS(a.validate(), DataError);
    a = {};
    a.window_end = {2021, 3};
    CHECK_THROWS_AS(project_loss(flat({2020, 1}, 12, 1.0), a), DataError);
}
