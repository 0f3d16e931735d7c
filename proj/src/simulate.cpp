#include "bj/simulate.hpp"

#include "bj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bj {

std::size_t SimulationConfig::effective_burn_in() const {
    return burn_in.value_or(std::max<std::size_t>(200, 13 * static_cast<std::size_t>(spec.s)));
}

double NormalStream::uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

TimeSeries simulate(const SimulationConfig& config) {
    const SarimaSpec& spec = config.spec;
    if (spec.p < 0 || spec.d < 0 || spec.q < 0 || spec.P < 0 || spec.D < 0 || spec.Q < 0) {
        throw DataError("model orders must be non-negative");
    }
    if (spec.is_seasonal() && spec.s < 2) throw DataError("seasonal period must be at least 2");
    config.params.check_shape(spec);
    if (config.n < 1) throw DataError("simulation length must be at least 1");
    if (!(config.params.sigma2 >= 0.0)) throw DataError("innovation variance must be non-negative");
    if (!root_moduli(config.params).outside(1.0)) {
        throw NumericalError("simulation parameters are not stationary and invertible");
    }
    const std::size_t max_degree = std::max(spec.ar_span(), spec.ma_span());
    const std::size_t burn = config.effective_burn_in();
    if (burn < 10 * max_degree) {
        throw DataError("burn-in of " + std::to_string(burn) + " is below 10x the polynomial degree");
    }

    const PolyExpansion poly = expand(spec, config.params);
    const double mean = config.params.constant.value_or(0.0);
    const double sd = std::sqrt(config.params.sigma2);
    const std::size_t total = burn + config.n;

    NormalStream normal(config.seed);
    std::vector<double> x(total, 0.0), e(total, 0.0), w(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = sd * normal.next();
        double v = e[t];
        for (std::size_t k = 1; k < poly.ar_poly.size() && k <= t; ++k) v -= poly.ar_poly[k] * x[t - k];
        for (std::size_t k = 1; k < poly.ma_poly.size() && k <= t; ++k) v += poly.ma_poly[k] * e[t - k];
        x[t] = v;
        w[t] = v + mean;
    }

    const std::size_t consumed = static_cast<std::size_t>(spec.d + spec.D * spec.s);
    const std::vector<double> zeros(consumed, 0.0);
    const std::vector<double> levels = integrate_values(w, zeros, spec.d, spec.D, spec.s);
    return TimeSeries(config.start, std::vector<double>(levels.end() - static_cast<std::ptrdiff_t>(config.n),
                                                        levels.end()));
}

}  // namespace bj
