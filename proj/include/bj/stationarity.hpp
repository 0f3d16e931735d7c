#pragma once

#include "bj/series.hpp"

#include <optional>
#include <span>

namespace bj {

struct AdfResult {
    double statistic = 0.0;  // t-ratio on the lagged level
    int lag_order = 0;
    double p_value = 1.0;    // interpolated, clamped to [0.01, 0.99]
    bool p_value_clamped = false;
    bool reject_unit_root_at_05 = false;
};

/// Augmented Dickey-Fuller test with constant and linear trend. The default
/// lag order is floor((N − 1)^(1/3)).
AdfResult adf_test(std::span<const double> x, std::optional<int> lag_order = std::nullopt);
inline AdfResult adf_test(const TimeSeries& ts, std::optional<int> lag_order = std::nullopt) {
    return adf_test(ts.values(), lag_order);
}

/// Dickey-Fuller p-value (trend case) for `statistic` at effective sample size
/// `n`, by bilinear interpolation in the finite-sample critical-value table.
/// Sets `clamped` when the statistic falls outside the table.
double adf_p_value(double statistic, double n, bool* clamped = nullptr);

}  // namespace bj
