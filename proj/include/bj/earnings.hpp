#pragma once

#include "bj/forecasting.hpp"
#include "bj/series.hpp"

#include <vector>

namespace bj {

struct EarningsAssumptions {
    double ade = 8423.98;       // average daily expenditure per visitor-night
    double alos = 7.11;         // average length of stay, nights
    bool round_alos = true;     // use the nearest whole number of nights
    YearMonth window_start{2020, 4};
    YearMonth window_end{2020, 7};  // inclusive

    [[nodiscard]] double nights() const;
    void validate() const;
};

struct EarningsProjection {
    std::vector<YearMonth> months;
    std::vector<double> arrivals_used;
    std::vector<double> monthly_loss;
    double total_loss = 0.0;
    double nights = 0.0;
};

/// Revenue foregone if arrivals drop to zero over the window:
/// forecast arrivals × ADE × nights for each month, summed.
EarningsProjection project_loss(const ForecastResult& forecast,
                                const EarningsAssumptions& assumptions);

}  // namespace bj
