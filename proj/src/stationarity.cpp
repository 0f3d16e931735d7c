#include "bj/stationarity.hpp"

#include "bj/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

namespace bj {

namespace {

// Dickey-Fuller critical values for the constant + trend regression
// (Fuller 1976, Table 8.5.2; Banerjee et al. 1993, Table 4.2).
// Rows: sample sizes; columns: cumulative probabilities.
constexpr std::array<double, 6> kSizes{25, 50, 100, 250, 500, 100000};
constexpr std::array<double, 8> kProbs{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};
constexpr std::array<std::array<double, 8>, 6> kCritical{{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

// Piecewise-linear interpolation with end values held constant.
template <std::size_t N>
double interp(const std::array<double, N>& xs, const std::array<double, N>& ys, double x,
              bool* clamped) {
    if (x <= xs.front()) {
        if (clamped) *clamped = x < xs.front();
        return ys.front();
    }
    if (x >= xs.back()) {
        if (clamped) *clamped = x > xs.back();
        return ys.back();
    }
    if (clamped) *clamped = false;
    std::size_t i = 1;
    while (xs[i] < x) ++i;
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

double adf_p_value(double statistic, double n, bool* clamped) {
    std::array<double, 8> row{};
    for (std::size_t c = 0; c < kProbs.size(); ++c) {
        std::array<double, 6> column{};
        for (std::size_t r = 0; r < kSizes.size(); ++r) column[r] = kCritical[r][c];
        row[c] = interp(kSizes, column, n, nullptr);
    }
    return interp(row, kProbs, statistic, clamped);
}

AdfResult adf_test(std::span<const double> x, std::optional<int> lag_order) {
    const int N = static_cast<int>(x.size());
    const int k = lag_order.value_or(
        N >= 2 ? static_cast<int>(std::floor(std::cbrt(static_cast<double>(N - 1)))) : 0);
    if (k < 0) throw DataError("ADF lag order must be non-negative");
    if (N < 10 + k) {
        throw DataError("ADF test needs at least " + std::to_string(10 + k) +
                        " observations, got " + std::to_string(N));
    }

    const int n = N - 1;  // length of the differenced series
    std::vector<double> dy(n);
    for (int i = 0; i < n; ++i) dy[i] = x[i + 1] - x[i];

    // Rows t = k..n-1: dy[t] ~ 1 + x[t] + (t+1) + dy[t-1..t-k].
    const int rows = n - k;
    const int cols = 3 + k;
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = r + k;
        y(r) = dy[t];
        X(r, 0) = 1.0;
        X(r, 1) = x[t];
        X(r, 2) = static_cast<double>(t + 1);
        for (int j = 1; j <= k; ++j) X(r, 2 + j) = dy[t - j];
    }
    if (rows <= cols) throw DataError("ADF regression has no residual degrees of freedom");

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < cols) throw NumericalError("ADF regression is numerically singular");
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double s2 = resid.squaredNorm() / static_cast<double>(rows - cols);
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(cols, cols));
    const double se = std::sqrt(s2 * xtx_inv(1, 1));
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw NumericalError("ADF regression produced a degenerate standard error");
    }

    AdfResult out;
    out.lag_order = k;
    out.statistic = beta(1) / se;
    out.p_value = adf_p_value(out.statistic, static_cast<double>(n), &out.p_value_clamped);
    out.reject_unit_root_at_05 = out.p_value < 0.05;
    return out;
}

}  // namespace bj
