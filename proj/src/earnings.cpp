#include "bj/earnings.hpp"

#include "bj/errors.hpp"

#include <cmath>

namespace bj {

double EarningsAssumptions::nights() const { return round_alos ? std::round(alos) : alos; }

void EarningsAssumptions::validate() const {
    if (!(ade > 0.0)) throw DataError("average daily expenditure must be positive");
    if (!(nights() >= 1.0)) throw DataError("average length of stay must be at least one night");
    if (window_end < window_start) throw DataError("loss window is empty");
}

EarningsProjection project_loss(const ForecastResult& forecast,
                                const EarningsAssumptions& assumptions) {
    assumptions.validate();
    const int first = forecast.start.months_until(assumptions.window_start);
    const int last = forecast.start.months_until(assumptions.window_end);
    if (first < 0 || last >= forecast.horizon) {
        throw DataError("loss window " + assumptions.window_start.to_string() + ".." +
                        assumptions.window_end.to_string() + " is outside the forecast horizon " +
                        forecast.start.to_string() + ".." +
                        forecast.month_at(forecast.horizon - 1).to_string());
    }
    EarningsProjection out;
    out.nights = assumptions.nights();
    for (int i = first; i <= last; ++i) {
        const double arrivals = forecast.point[static_cast<std::size_t>(i)];
        const double loss = arrivals * assumptions.ade * out.nights;
        out.months.push_back(forecast.month_at(i));
        out.arrivals_used.push_back(arrivals);
        out.monthly_loss.push_back(loss);
        out.total_loss += loss;
    }
    return out;
}

}  // namespace bj
