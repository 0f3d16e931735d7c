#pragma once

#include "bj/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bj {

struct CorrelogramResult {
    enum class Kind { Acf, Pacf };

    Kind kind = Kind::Acf;
    std::vector<double> values;  // values[k-1] is the correlation at lag k
    double bound = 0.0;          // two-sided white-noise band is ±bound
    std::size_t n = 0;

    [[nodiscard]] std::size_t max_lag() const noexcept { return values.size(); }
    [[nodiscard]] double at_lag(std::size_t k) const { return k == 0 ? 1.0 : values.at(k - 1); }
    [[nodiscard]] std::size_t exceedances() const noexcept;
};

/// Sample autocorrelations r_1..r_K, normalised by the full-sample sum of
/// squared deviations.
CorrelogramResult acf(std::span<const double> x, std::size_t max_lag, double alpha = 0.05);
inline CorrelogramResult acf(const TimeSeries& ts, std::size_t max_lag, double alpha = 0.05) {
    return acf(ts.values(), max_lag, alpha);
}

/// Sample partial autocorrelations via the Durbin-Levinson recursion on the
/// sample autocorrelations.
CorrelogramResult pacf(std::span<const double> x, std::size_t max_lag, double alpha = 0.05);
inline CorrelogramResult pacf(const TimeSeries& ts, std::size_t max_lag, double alpha = 0.05) {
    return pacf(ts.values(), max_lag, alpha);
}

/// z_{1-α/2} / sqrt(n).
double white_noise_bound(std::size_t n, double alpha = 0.05);

/// floor(min(10·log10(n), n − 1)).
std::size_t default_max_lag(std::size_t n);

}  // namespace bj
