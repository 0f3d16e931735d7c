#include "bj/errors.hpp"
#include "bj/selection.hpp"
#include "bj/simulate.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace bj;

namespace {

std::pair<TimeSeries, TimeSeries> ar1_split(std::uint64_t seed) {
    SimulationConfig c;
    c.spec = {1, 0, 0, 0, 0, 0, 12, false};
    c.params.ar = {0.6};
    c.n = 212;
    c.seed = seed;
    c.start = {2000, 1};
    return split_at(simulate(c), YearMonth{2000, 1}.plus(199));
}

}  // namespace

TEST_CASE("grid enumeration") {
    GridBounds b;
    b.max_p = b.max_q = 1;
    b.max_P = b.max_Q = 1;
    b.d_values = {0, 1};
    b.D_values = {0};
    const auto specs = enumerate_grid(b);
    CHECK(specs.size() == 31);  // ARIMA(0,1,0) has nothing to estimate
    CHECK(std::is_sorted(specs.begin(), specs.end()));
    for (const SarimaSpec& s : specs) CHECK(s.include_constant == (s.d + s.D == 0));
    b.max_p = 4;
    CHECK_THROWS_AS(enumerate_grid(b), DataError);
}

TEST_CASE("best AIC is close to the true order's AIC for an AR(1)") {
    GridBounds b;
    b.max_P = b.max_Q = 0;
    b.d_values = {0};
    b.D_values = {0};
    SelectionOptions o;
    o.threads = 1;
    int hits = 0;
    for (std::uint64_t seed = 500; seed < 600; ++seed) {
        const auto [train, test] = ar1_split(seed);
        const SelectionReport r = grid_search(train, test, b, o);
        const double best = *r.candidates[r.ranking.front()].aic;
        for (const Candidate& c : r.candidates) {
            if (c.spec == SarimaSpec{1, 0, 0, 0, 0, 0, 12, true}) hits += *c.aic - best <= 2.0;
        }
    }
    CHECK(hits >= 80);
}

TEST_CASE("single-candidate selection and report structure") {
    const auto [train, test] = ar1_split(3);
    const SarimaSpec only{1, 0, 0, 0, 0, 0, 12, true};
    const SelectionReport r = select_model(train, test, {only});
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.chosen == 0);
    CHECK(r.chosen_candidate().spec == only);
    CHECK(r.chosen_candidate().rmse.has_value());
    CHECK(r.chosen_candidate().diagnostics.has_value());
}

TEST_CASE("ranking, holdout evaluation and thread independence") {
    const auto [train, test] = ar1_split(4);
    GridBounds b;
    b.max_P = b.max_Q = 0;
    b.d_values = {0};
    b.D_values = {0};
    SelectionOptions o;
    o.top_k = 3;
    o.threads = 1;
    const SelectionReport one = grid_search(train, test, b, o);
    o.threads = 4;
    const SelectionReport four = grid_search(train, test, b, o);
    CHECK(one.ranking == four.ranking);
    CHECK(one.chosen == four.chosen);
    CHECK(one.evaluated.size() == 3);
    for (std::size_t i = 1; i < one.ranking.size(); ++i) {
        CHECK(*one.candidates[one.ranking[i - 1]].aic <= *one.candidates[one.ranking[i]].aic);
    }
    for (std::size_t i = 0; i < one.candidates.size(); ++i) {
        CHECK(*one.candidates[i].aic == *four.candidates[i].aic);
    }
    double best_rmse = 1e300;
    for (std::size_t i : one.evaluated) best_rmse = std::min(best_rmse, *one.candidates[i].rmse);
    CHECK(*one.chosen_candidate().rmse == best_rmse);
    CHECK(one.chosen_candidate().converged);
}

TEST_CASE("selection argument checks") {
    const auto [train, test] = ar1_split(5);
    CHECK_THROWS_AS(select_model(train, test, {}), DataError);
    SelectionOptions o;
    o.top_k = 0;
    CHECK_THROWS_AS(select_model(train, test, {{1, 0, 0, 0, 0, 0, 12, true}}, o), DataError);
    CHECK_THROWS_AS(select_model(train, train, {{1, 0, 0, 0, 0, 0, 12, true}}), DataError);
}
