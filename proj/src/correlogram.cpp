#include "bj/correlogram.hpp"

#include "bj/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bj {

std::size_t CorrelogramResult::exceedances() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        values.begin(), values.end(), [this](double v) { return std::abs(v) > bound; }));
}

double white_noise_bound(std::size_t n, double alpha) {
    if (n < 2) throw DataError("white-noise bound needs at least 2 observations");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("significance level must lie in (0, 1)");
    const boost::math::normal standard;
    return boost::math::quantile(standard, 1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(n));
}

std::size_t default_max_lag(std::size_t n) {
    if (n < 2) return 0;
    const double by_log = 10.0 * std::log10(static_cast<double>(n));
    return static_cast<std::size_t>(std::floor(std::min(by_log, static_cast<double>(n - 1))));
}

namespace {

void check_lags(std::size_t n, std::size_t max_lag) {
    if (n < 2) throw DataError("correlogram needs at least 2 observations");
    if (max_lag >= n) {
        throw DataError("lag " + std::to_string(max_lag) + " out of range for " +
                        std::to_string(n) + " observations");
    }
}

}  // namespace

CorrelogramResult acf(std::span<const double> x, std::size_t max_lag, double alpha) {
    const std::size_t n = x.size();
    check_lags(n, max_lag);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw DataError("autocorrelation undefined for a constant series");

    CorrelogramResult out;
    out.kind = CorrelogramResult::Kind::Acf;
    out.n = n;
    out.bound = white_noise_bound(n, alpha);
    out.values.reserve(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) num += (x[t] - mean) * (x[t + k] - mean);
        out.values.push_back(num / denom);
    }
    return out;
}

CorrelogramResult pacf(std::span<const double> x, std::size_t max_lag, double alpha) {
    if (max_lag < 1) throw DataError("partial autocorrelation needs max_lag >= 1");
    const CorrelogramResult r = acf(x, max_lag, alpha);

    CorrelogramResult out;
    out.kind = CorrelogramResult::Kind::Pacf;
    out.n = r.n;
    out.bound = r.bound;
    out.values.reserve(max_lag);

    // phi[j-1] holds φ_{k,j} for the current order k.
    std::vector<double> phi{r.values[0]};
    out.values.push_back(phi[0]);
    for (std::size_t k = 2; k <= max_lag; ++k) {
        double num = r.values[k - 1];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= phi[j - 1] * r.values[k - j - 1];
            den -= phi[j - 1] * r.values[j - 1];
        }
        if (std::abs(den) < 1e-12) {
            throw NumericalError("Durbin-Levinson recursion is singular at lag " +
                                 std::to_string(k));
        }
        const double phi_kk = num / den;
        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - phi_kk * phi[k - j - 1];
        next[k - 1] = phi_kk;
        phi = std::move(next);
        out.values.push_back(phi_kk);
    }
    return out;
}

}  // namespace bj
