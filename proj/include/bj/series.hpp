#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bj {

/// Calendar month, the sampling unit of every series in the library.
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    /// Parses "YYYY-MM". Throws DataError on malformed input.
    static YearMonth parse(std::string_view text);

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] YearMonth plus(int months) const;
    /// Number of months from `*this` to `other` (negative when `other` is earlier).
    [[nodiscard]] int months_until(YearMonth other) const;

    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

enum class BoxCoxVariant {
    Shifted,  // (y^λ − 1)/λ, ln y at λ = 0
    Power,    // y^λ,         ln y at λ = 0
};

struct TransformStep {
    enum class Kind { RegularDifference, SeasonalDifference, BoxCox };

    Kind kind = Kind::BoxCox;
    int order = 0;   // differencing steps
    int period = 1;  // lag of a seasonal difference
    double lambda = 1.0;
    BoxCoxVariant variant = BoxCoxVariant::Shifted;
    /// Leading values consumed by a differencing step, kept for exact inversion.
    std::vector<double> anchor;

    friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

/// Regularly spaced monthly observations with the transforms applied so far.
class TimeSeries {
public:
    TimeSeries(YearMonth start, std::vector<double> values,
               std::vector<TransformStep> transform_log = {});

    [[nodiscard]] YearMonth start() const noexcept { return start_; }
    [[nodiscard]] YearMonth end() const noexcept { return month_at(values_.size() - 1); }
    [[nodiscard]] YearMonth month_at(std::size_t index) const noexcept {
        return start_.plus(static_cast<int>(index));
    }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] const std::vector<TransformStep>& transform_log() const noexcept {
        return log_;
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    YearMonth start_;
    std::vector<double> values_;
    std::vector<TransformStep> log_;
};

/// Seasonal differencing (lag `s`, applied `D` times) followed by regular
/// differencing (lag 1, applied `d` times). The result is `d + D*s` shorter
/// and starts that many months later.
TimeSeries difference(const TimeSeries& ts, int d, int D, int s);

/// Undoes differencing on raw values: `anchor` holds the `d + D*s` values that
/// precede `diffs` on the undifferenced scale. Returns anchor followed by the
/// reconstructed values.
std::vector<double> integrate_values(std::span<const double> diffs,
                                     std::span<const double> anchor, int d, int D, int s);

/// Inverse of the trailing differencing steps recorded in `ts.transform_log()`.
/// `anchor` must hold exactly the leading values those steps consumed.
TimeSeries integrate(const TimeSeries& ts, std::span<const double> anchor);

double boxcox_value(double y, double lambda, BoxCoxVariant variant);
double inv_boxcox_value(double w, double lambda, BoxCoxVariant variant);

TimeSeries boxcox(const TimeSeries& ts, double lambda,
                  BoxCoxVariant variant = BoxCoxVariant::Shifted);
TimeSeries inv_boxcox(const TimeSeries& ts, double lambda,
                      BoxCoxVariant variant = BoxCoxVariant::Shifted);

/// Guerrero's coefficient-of-variation estimate of the Box-Cox parameter,
/// searched over [-1, 2] using non-overlapping subseries of `period` months.
double select_lambda(const TimeSeries& ts, int period = 12);

/// Splits after `boundary`: the first part ends at `boundary`, the second
/// starts the month after.
std::pair<TimeSeries, TimeSeries> split_at(const TimeSeries& ts, YearMonth boundary);

/// Joins two contiguous series (second must start the month after the first ends).
TimeSeries concat(const TimeSeries& head, const TimeSeries& tail);

/// Re-applies `steps` to `original`, reproducing the transformed series.
TimeSeries replay(const TimeSeries& original, std::span<const TransformStep> steps);

}  // namespace bj
