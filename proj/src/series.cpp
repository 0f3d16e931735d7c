#include "bj/series.hpp"

#include "bj/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace bj {

YearMonth YearMonth::parse(std::string_view text) {
    auto fail = [&] {
        return DataError("malformed month '" + std::string(text) + "', expected YYYY-MM");
    };
    if (text.size() != 7 || text[4] != '-') throw fail();
    YearMonth ym;
    auto [p1, e1] = std::from_chars(text.data(), text.data() + 4, ym.year);
    auto [p2, e2] = std::from_chars(text.data() + 5, text.data() + 7, ym.month);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + 4 ||
        p2 != text.data() + 7 || ym.month < 1 || ym.month > 12) {
        throw fail();
    }
    return ym;
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::plus(int months) const {
    int total = year * 12 + (month - 1) + months;
    int y = total >= 0 ? total / 12 : -((-total + 11) / 12);
    return {y, total - y * 12 + 1};
}

int YearMonth::months_until(YearMonth other) const {
    return (other.year * 12 + other.month) - (year * 12 + month);
}

TimeSeries::TimeSeries(YearMonth start, std::vector<double> values,
                       std::vector<TransformStep> transform_log)
    : start_(start), values_(std::move(values)), log_(std::move(transform_log)) {
    if (values_.empty()) throw DataError("time series must contain at least one value");
    if (start_.month < 1 || start_.month > 12) throw DataError("invalid start month");
}

namespace {

std::vector<double> lag_difference(std::span<const double> x, int lag) {
    std::vector<double> out;
    if (x.size() <= static_cast<std::size_t>(lag)) return out;
    out.reserve(x.size() - lag);
    for (std::size_t i = lag; i < x.size(); ++i) out.push_back(x[i] - x[i - lag]);
    return out;
}

void check_orders(int d, int D, int s) {
    if (d < 0 || D < 0) throw DataError("differencing orders must be non-negative");
    if (D > 0 && s < 2) throw DataError("seasonal period must be at least 2");
}

}  // namespace

TimeSeries difference(const TimeSeries& ts, int d, int D, int s) {
    check_orders(d, D, s);
    const std::size_t consumed = static_cast<std::size_t>(d + D * (D > 0 ? s : 0));
    if (ts.size() <= consumed) {
        throw DataError("series of length " + std::to_string(ts.size()) +
                        " is too short for differencing that consumes " +
                        std::to_string(consumed) + " values");
    }
    if (d == 0 && D == 0) return ts;

    std::vector<TransformStep> log = ts.transform_log();
    std::vector<double> cur = ts.values();
    if (D > 0) {
        TransformStep step;
        step.kind = TransformStep::Kind::SeasonalDifference;
        step.order = D;
        step.period = s;
        step.anchor.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(D) * s);
        for (int i = 0; i < D; ++i) cur = lag_difference(cur, s);
        log.push_back(std::move(step));
    }
    if (d > 0) {
        TransformStep step;
        step.kind = TransformStep::Kind::RegularDifference;
        step.order = d;
        step.anchor.assign(cur.begin(), cur.begin() + d);
        for (int i = 0; i < d; ++i) cur = lag_difference(cur, 1);
        log.push_back(std::move(step));
    }
    return TimeSeries(ts.start().plus(static_cast<int>(consumed)), std::move(cur),
                      std::move(log));
}

std::vector<double> integrate_values(std::span<const double> diffs,
                                     std::span<const double> anchor, int d, int D, int s) {
    check_orders(d, D, s);
    const std::size_t consumed = static_cast<std::size_t>(d + D * (D > 0 ? s : 0));
    if (anchor.size() != consumed) {
        throw DataError("anchor holds " + std::to_string(anchor.size()) +
                        " values but differencing consumed " + std::to_string(consumed));
    }

    // Leading values of every intermediate stage follow from differencing the
    // anchor itself.
    struct Stage {
        int lag;
        std::vector<double> head;
    };
    std::vector<Stage> stages;
    std::vector<double> cur(anchor.begin(), anchor.end());
    for (int i = 0; i < D; ++i) {
        stages.push_back({s, std::vector<double>(cur.begin(), cur.begin() + s)});
        cur = lag_difference(cur, s);
    }
    for (int i = 0; i < d; ++i) {
        stages.push_back({1, std::vector<double>(cur.begin(), cur.begin() + 1)});
        cur = lag_difference(cur, 1);
    }

    std::vector<double> series(diffs.begin(), diffs.end());
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        std::vector<double> out = it->head;
        out.reserve(it->head.size() + series.size());
        for (double v : series) out.push_back(v + out[out.size() - it->lag]);
        series = std::move(out);
    }
    std::copy(anchor.begin(), anchor.end(), series.begin());
    return series;
}

TimeSeries integrate(const TimeSeries& ts, std::span<const double> anchor) {
    std::vector<TransformStep> log = ts.transform_log();
    int d = 0, D = 0, s = 1;
    if (!log.empty() && log.back().kind == TransformStep::Kind::RegularDifference) {
        d = log.back().order;
        log.pop_back();
    }
    if (!log.empty() && log.back().kind == TransformStep::Kind::SeasonalDifference) {
        D = log.back().order;
        s = log.back().period;
        log.pop_back();
    }
    if (d == 0 && D == 0) {
        if (!anchor.empty()) throw DataError("anchor given for an undifferenced series");
        return ts;
    }
    auto values = integrate_values(ts.values(), anchor, d, D, s);
    const int consumed = d + D * s;
    return TimeSeries(ts.start().plus(-consumed), std::move(values), std::move(log));
}

double boxcox_value(double y, double lambda, BoxCoxVariant variant) {
    if (!(y > 0.0)) {
        throw DataError("Box-Cox transform requires positive values, got " + std::to_string(y));
    }
    if (!std::isfinite(lambda)) throw DataError("Box-Cox lambda must be finite");
    if (lambda == 0.0) return std::log(y);
    if (variant == BoxCoxVariant::Power) return std::pow(y, lambda);
    return std::expm1(lambda * std::log(y)) / lambda;
}

double inv_boxcox_value(double w, double lambda, BoxCoxVariant variant) {
    if (!std::isfinite(lambda)) throw DataError("Box-Cox lambda must be finite");
    if (lambda == 0.0) return std::exp(w);
    if (variant == BoxCoxVariant::Power) {
        if (!(w > 0.0)) throw DataError("inverse power transform requires positive values");
        return std::pow(w, 1.0 / lambda);
    }
    const double base = lambda * w;
    if (!(base > -1.0)) {
        throw DataError("inverse Box-Cox undefined: lambda*w + 1 <= 0 for w = " +
                        std::to_string(w));
    }
    return std::exp(std::log1p(base) / lambda);
}

TimeSeries boxcox(const TimeSeries& ts, double lambda, BoxCoxVariant variant) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double y : ts.values()) out.push_back(boxcox_value(y, lambda, variant));
    auto log = ts.transform_log();
    TransformStep step;
    step.kind = TransformStep::Kind::BoxCox;
    step.lambda = lambda;
    step.variant = variant;
    log.push_back(step);
    return TimeSeries(ts.start(), std::move(out), std::move(log));
}

TimeSeries inv_boxcox(const TimeSeries& ts, double lambda, BoxCoxVariant variant) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double w : ts.values()) out.push_back(inv_boxcox_value(w, lambda, variant));
    auto log = ts.transform_log();
    if (!log.empty() && log.back().kind == TransformStep::Kind::BoxCox &&
        log.back().lambda == lambda && log.back().variant == variant) {
        log.pop_back();
    }
    return TimeSeries(ts.start(), std::move(out), std::move(log));
}

namespace {

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sd_of(std::span<const double> x) {
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

double select_lambda(const TimeSeries& ts, int period) {
    if (period < 2) throw DataError("Guerrero lambda selection needs a period of at least 2");
    const std::size_t p = static_cast<std::size_t>(period);
    const std::size_t years = ts.size() / p;
    if (years < 2) {
        throw DataError("Guerrero lambda selection needs at least two full seasons, got " +
                        std::to_string(ts.size()) + " values");
    }
    // Subseries are taken from the end so a partial first season is dropped.
    const std::size_t offset = ts.size() - years * p;
    std::vector<double> means(years), sds(years);
    for (std::size_t k = 0; k < years; ++k) {
        std::span<const double> block(ts.values().data() + offset + k * p, p);
        for (double v : block) {
            if (!(v > 0.0)) throw DataError("Guerrero lambda selection requires positive values");
        }
        means[k] = mean_of(block);
        sds[k] = sd_of(block);
    }
    auto cv = [&](double lambda) {
        std::vector<double> ratio(years);
        for (std::size_t k = 0; k < years; ++k) {
            ratio[k] = sds[k] / std::pow(means[k], 1.0 - lambda);
        }
        return sd_of(ratio) / mean_of(ratio);
    };
    const int bits = std::numeric_limits<double>::digits / 2;
    return boost::math::tools::brent_find_minima(cv, -1.0, 2.0, bits).first;
}

std::pair<TimeSeries, TimeSeries> split_at(const TimeSeries& ts, YearMonth boundary) {
    const int k = ts.start().months_until(boundary);
    if (k < 0 || k >= static_cast<int>(ts.size()) - 1) {
        throw DataError("split boundary " + boundary.to_string() + " is outside " +
                        ts.start().to_string() + ".." + ts.end().to_string() +
                        " (must leave at least one month on each side)");
    }
    const auto cut = ts.values().begin() + k + 1;
    return {TimeSeries(ts.start(), {ts.values().begin(), cut}, ts.transform_log()),
            TimeSeries(boundary.plus(1), {cut, ts.values().end()}, ts.transform_log())};
}

TimeSeries concat(const TimeSeries& head, const TimeSeries& tail) {
    if (head.end().plus(1) != tail.start()) {
        throw DataError("cannot concatenate: " + tail.start().to_string() +
                        " does not follow " + head.end().to_string());
    }
    if (head.transform_log() != tail.transform_log()) {
        throw DataError("cannot concatenate series with different transform histories");
    }
    std::vector<double> values = head.values();
    values.insert(values.end(), tail.values().begin(), tail.values().end());
    return TimeSeries(head.start(), std::move(values), head.transform_log());
}

TimeSeries replay(const TimeSeries& original, std::span<const TransformStep> steps) {
    TimeSeries cur = original;
    for (const auto& step : steps) {
        switch (step.kind) {
            case TransformStep::Kind::BoxCox:
                cur = boxcox(cur, step.lambda, step.variant);
                break;
            case TransformStep::Kind::SeasonalDifference:
                cur = difference(cur, 0, step.order, step.period);
                break;
            case TransformStep::Kind::RegularDifference:
                cur = difference(cur, step.order, 0, 1);
                break;
        }
    }
    return cur;
}

}  // namespace bj
