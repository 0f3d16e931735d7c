#include "bj/forecasting.hpp"

#include "bj/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <string>

namespace bj {

namespace {

struct BackTransform {
    std::vector<TransformStep> boxcox_steps;  // in application order

    double point(double w) const {
        for (auto it = boxcox_steps.rbegin(); it != boxcox_steps.rend(); ++it) {
            w = inv_boxcox_value(w, it->lambda, it->variant);
        }
        return w;
    }

    // Lower limit of the inverse transform's domain maps to 0 on the original scale.
    double bound(double w) const {
        for (auto it = boxcox_steps.rbegin(); it != boxcox_steps.rend(); ++it) {
            const bool shifted = it->variant == BoxCoxVariant::Shifted;
            if (it->lambda != 0.0 && ((shifted && !(it->lambda * w > -1.0)) || (!shifted && !(w > 0.0)))) {
                return 0.0;
            }
            w = inv_boxcox_value(w, it->lambda, it->variant);
        }
        return w;
    }

    // Second-order mean correction for a single Box-Cox step.
    double mean(double w, double variance) const {
        if (boxcox_steps.size() != 1) return point(w);
        const TransformStep& step = boxcox_steps.front();
        const double lambda = step.lambda;
        const double y = point(w);
        if (lambda == 0.0) return y * (1.0 + variance / 2.0);
        if (step.variant == BoxCoxVariant::Shifted) {
            const double base = lambda * w + 1.0;
            return y * (1.0 + variance * (1.0 - lambda) / (2.0 * base * base));
        }
        const double e = 1.0 / lambda;
        return y + 0.5 * variance * e * (e - 1.0) * std::pow(w, e - 2.0);
    }
};

BackTransform back_transform_for(const FitResult& fit) {
    BackTransform out;
    if (!fit.source) return out;
    for (const auto& step : fit.source->transform_log()) {
        if (step.kind != TransformStep::Kind::BoxCox) {
            throw DataError("forecasting needs an undifferenced input series; difference through "
                            "the model order instead");
        }
        out.boxcox_steps.push_back(step);
    }
    return out;
}

}  // namespace

ForecastResult forecast(const FitResult& fit, int horizon, const ForecastOptions& options) {
    if (!fit.converged) {
        throw NumericalError("cannot forecast from a non-converged fit of " + fit.spec.label());
    }
    if (horizon < 1) throw DataError("forecast horizon must be at least 1");
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw DataError("interval level must lie in (0, 1)");
    }
    const SarimaSpec& spec = fit.spec;
    const std::size_t consumed = static_cast<std::size_t>(spec.d + spec.D * spec.s);
    if (fit.series.size() < consumed) {
        throw DataError("history is shorter than the differencing it must anchor");
    }
    const BackTransform back = back_transform_for(fit);

    const PolyExpansion poly = expand(spec, fit.params);
    const double mean = fit.params.constant.value_or(0.0);
    const std::size_t n = fit.differenced.size();
    const std::size_t h = static_cast<std::size_t>(horizon);

    std::vector<double> x(n + h, 0.0), e(n + h, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = fit.differenced[t] - mean;
        e[t] = fit.residuals[t];
    }
    std::vector<double> diffs(h);
    for (std::size_t t = n; t < n + h; ++t) {
        double v = 0.0;
        for (std::size_t k = 1; k < poly.ar_poly.size() && k <= t; ++k) v -= poly.ar_poly[k] * x[t - k];
        for (std::size_t k = 1; k < poly.ma_poly.size() && k <= t; ++k) v += poly.ma_poly[k] * e[t - k];
        x[t] = v;
        diffs[t - n] = v + mean;
    }

    const std::span<const double> history(fit.series);
    const auto integrated =
        integrate_values(diffs, history.subspan(history.size() - consumed), spec.d, spec.D, spec.s);

    // ψ weights of the integrated model.
    std::vector<double> ar_full = poly.ar_poly;
    const std::vector<double> regular{1.0, -1.0};
    std::vector<double> seasonal(static_cast<std::size_t>(spec.s) + 1, 0.0);
    seasonal.front() = 1.0;
    seasonal.back() = -1.0;
    for (int i = 0; i < spec.d; ++i) ar_full = poly_multiply(ar_full, regular);
    for (int i = 0; i < spec.D; ++i) ar_full = poly_multiply(ar_full, seasonal);

    ForecastResult out;
    out.start = fit.source ? fit.source->end().plus(1) : YearMonth{};
    out.horizon = horizon;
    out.level = options.level;
    out.psi_weights = psi_weights(ar_full, poly.ma_poly, h);
    const double z =
        boost::math::quantile(boost::math::normal(), (1.0 + options.level) / 2.0);

    double cumulative = 0.0;
    for (std::size_t j = 0; j < h; ++j) {
        cumulative += out.psi_weights[j] * out.psi_weights[j];
        const double variance = fit.params.sigma2 * cumulative;
        const double centre = integrated[consumed + j];
        const double half = z * std::sqrt(variance);
        out.variance.push_back(variance);
        out.transformed_point.push_back(centre);
        out.transformed_lower.push_back(centre - half);
        out.transformed_upper.push_back(centre + half);

        const double point = options.bias_adjust ? back.mean(centre, variance) : back.point(centre);
        double lower = back.bound(centre - half);
        const double upper = back.bound(centre + half);
        bool clamped = false;
        if (options.clamp_nonnegative && lower < 0.0 && point >= 0.0) {
            lower = 0.0;
            clamped = true;
        }
        out.point.push_back(point);
        out.lower.push_back(lower);
        out.upper.push_back(upper);
        out.lower_clamped.push_back(clamped);
    }
    return out;
}

AccuracyResult rmse(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size() || forecast.empty()) {
        throw DataError("RMSE needs equal, non-empty vectors (got " +
                        std::to_string(forecast.size()) + " and " +
                        std::to_string(actual.size()) + ")");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double diff = forecast[i] - actual[i];
        ss += diff * diff;
    }
    return {std::sqrt(ss / static_cast<double>(forecast.size())), forecast.size()};
}

}  // namespace bj
