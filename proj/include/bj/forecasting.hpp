#pragma once

#include "bj/sarima.hpp"
#include "bj/series.hpp"

#include <span>
#include <vector>

namespace bj {

struct ForecastOptions {
    double level = 0.95;
    /// Mean instead of median back-transform for Box-Cox models.
    bool bias_adjust = false;
    /// Negative lower bounds on the original scale are raised to zero.
    bool clamp_nonnegative = true;
};

struct ForecastResult {
    YearMonth start;   // month of the first forecast
    int horizon = 0;
    double level = 0.95;
    // Original scale (transform history undone).
    std::vector<double> point, lower, upper;
    std::vector<bool> lower_clamped;
    // Modelling scale: transformed but undifferenced.
    std::vector<double> transformed_point, transformed_lower, transformed_upper;
    std::vector<double> variance;     // forecast-error variance on the modelling scale
    std::vector<double> psi_weights;  // ψ_0..ψ_{h−1} of the integrated model

    [[nodiscard]] YearMonth month_at(int step) const { return start.plus(step); }
};

/// h-step forecasts with future innovations set to zero; intervals use
/// σ²·Σ_{i<j} ψ_i² where ψ comes from θ(B)/(φ(B)(1−B)^d(1−B^s)^D).
ForecastResult forecast(const FitResult& fit, int horizon, const ForecastOptions& options = {});

struct AccuracyResult {
    double rmse = 0.0;
    std::size_t n = 0;
};

AccuracyResult rmse(std::span<const double> forecast, std::span<const double> actual);

}  // namespace bj
