#include "bj/cli/dataset.hpp"
#include "bj/errors.hpp"

#include <catch_amalgamated.hpp>

using namespace bj;
using namespace bj::cli;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("parses a monthly arrivals file") {
    const auto d = parse_dataset("month,arrivals\n2012-01,100\n2012-02,250\n2012-03,175\n", "a.csv");
    CHECK(d.rows() == 3);
    CHECK(d.series.start() == YearMonth{2012, 1});
    CHECK(d.series.values() == std::vector<double>{100, 250, 175});
    CHECK(d.source == "a.csv");
}

TEST_CASE("accepts a byte-order mark and CRLF line endings") {
    const auto d = parse_dataset("\xEF\xBB\xBFmonth,arrivals\r\n2012-11,5\r\n2012-12,6\r\n2013-01,7\r\n");
    CHECK(d.rows() == 3);
    CHECK(d.series.end() == YearMonth{2013, 1});
}

TEST_CASE("format and parse roundtrip") {
    const TimeSeries ts({2019, 6}, {1.0, 22.0, 333.0, 4444.0, 55555.0, 666666.0, 7777777.0});
    const std::string text = format_dataset(ts);
    CHECK(text.rfind("month,arrivals\n2019-06,1\n", 0) == 0);
    CHECK(parse_dataset(text).series == ts);
    CHECK_THROWS_AS(format_dataset(TimeSeries({2019, 6}, {1.5})), DataError);
}

TEST_CASE("malformed files are rejected with their location") {
    CHECK_THROWS_AS(parse_dataset(""), DataError);
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n"), DataError);
    CHECK_THROWS_AS(parse_dataset("date,count\n2012-01,1\n"), DataError);
    CHECK_THROWS_WITH(parse_dataset("month,arrivals\n2012-01,1\n2012-03,2\n", "f.csv"),
                      ContainsSubstring("2012-02") && ContainsSubstring("f.csv"));
    CHECK_THROWS_WITH(parse_dataset("month,arrivals\n2012-02,1\n2012-01,2\n"),
                      ContainsSubstring("2012-01") && ContainsSubstring("out of order"));
    CHECK_THROWS_WITH(parse_dataset("month,arrivals\n2012-01,1\n2012-01,2\n"),
                      ContainsSubstring("duplicate"));
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n2012-01,-4\n"), DataError);
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n2012-01,0\n"), DataError);
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n2012-01,1.5\n"), DataError);
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n2012-13,1\n"), DataError);
    CHECK_THROWS_AS(parse_dataset("month,arrivals\n2012-01\n"), DataError);
    CHECK_THROWS_AS(ingest("/nonexistent/arrivals.csv"), DataError);
}

TEST_CASE("number formatting is shortest roundtrip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(29483930000.0) == "29483930000");
    CHECK(format_number(-2.5) == "-2.5");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
