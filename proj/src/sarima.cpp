#include "bj/sarima.hpp"

#include "bj/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace bj {

void SarimaSpec::validate() const {
    if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0) {
        throw DataError("model orders must be non-negative: " + label());
    }
    if (is_seasonal() && s < 2) throw DataError("seasonal period must be at least 2");
    if (p + q + P + Q == 0 && !include_constant) {
        throw DataError("model " + label() + " has nothing to estimate");
    }
}

std::string SarimaSpec::label() const {
    std::string out = "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," +
                      std::to_string(q) + ")";
    if (is_seasonal()) {
        out += "x(" + std::to_string(P) + "," + std::to_string(D) + "," + std::to_string(Q) +
               ")[" + std::to_string(s) + "]";
    }
    if (include_constant) out += "+c";
    return out;
}

std::vector<std::string> SarimaSpec::coefficient_names() const {
    std::vector<std::string> names;
    auto add = [&](const char* prefix, int count) {
        for (int i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
    };
    add("ar", p);
    add("ma", q);
    add("sar", P);
    add("sma", Q);
    if (include_constant) names.emplace_back("constant");
    return names;
}

SarimaParams SarimaParams::zeros(const SarimaSpec& spec) {
    SarimaParams out;
    out.ar.assign(spec.p, 0.0);
    out.ma.assign(spec.q, 0.0);
    out.sar.assign(spec.P, 0.0);
    out.sma.assign(spec.Q, 0.0);
    if (spec.include_constant) out.constant = 0.0;
    return out;
}

SarimaParams SarimaParams::unpack(const SarimaSpec& spec, std::span<const double> packed,
                                  double sigma2) {
    if (packed.size() != static_cast<std::size_t>(spec.n_coefficients())) {
        throw DataError("expected " + std::to_string(spec.n_coefficients()) +
                        " packed coefficients, got " + std::to_string(packed.size()));
    }
    SarimaParams out;
    auto it = packed.begin();
    auto take = [&](std::vector<double>& dst, int count) {
        dst.assign(it, it + count);
        it += count;
    };
    take(out.ar, spec.p);
    take(out.ma, spec.q);
    take(out.sar, spec.P);
    take(out.sma, spec.Q);
    if (spec.include_constant) out.constant = *it;
    out.sigma2 = sigma2;
    return out;
}

std::vector<double> SarimaParams::pack() const {
    std::vector<double> out;
    for (const auto* v : {&ar, &ma, &sar, &sma}) out.insert(out.end(), v->begin(), v->end());
    if (constant) out.push_back(*constant);
    return out;
}

void SarimaParams::check_shape(const SarimaSpec& spec) const {
    if (ar.size() != static_cast<std::size_t>(spec.p) ||
        ma.size() != static_cast<std::size_t>(spec.q) ||
        sar.size() != static_cast<std::size_t>(spec.P) ||
        sma.size() != static_cast<std::size_t>(spec.Q) ||
        constant.has_value() != spec.include_constant) {
        throw DataError("parameters do not match " + spec.label());
    }
}

std::vector<double> poly_multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

double min_root_modulus(std::span<const double> poly) {
    std::size_t degree = poly.size() == 0 ? 0 : poly.size() - 1;
    while (degree > 0 && poly[degree] == 0.0) --degree;
    if (degree == 0) return std::numeric_limits<double>::infinity();
    if (degree == 1) return std::abs(poly[0] / poly[1]);

    // Eigenvalues of the companion matrix of the reversed polynomial are the
    // reciprocals of the roots.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (std::size_t k = 0; k < degree; ++k) companion(0, k) = -poly[k + 1] / poly[0];
    for (std::size_t k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const double largest = solver.eigenvalues().cwiseAbs().maxCoeff();
    return largest == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / largest;
}

namespace {

// 1 + sign·(c_1 B + c_2 B² + ...), with lags spaced `spacing` apart.
std::vector<double> factor(std::span<const double> coefs, double sign, int spacing) {
    std::vector<double> out(coefs.size() * spacing + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 0; i < coefs.size(); ++i) out[(i + 1) * spacing] = sign * coefs[i];
    return out;
}

}  // namespace

RootModuli root_moduli(const SarimaParams& params) {
    RootModuli out;
    out.ar = min_root_modulus(factor(params.ar, -1.0, 1));
    out.ma = min_root_modulus(factor(params.ma, 1.0, 1));
    out.sar = min_root_modulus(factor(params.sar, -1.0, 1));
    out.sma = min_root_modulus(factor(params.sma, 1.0, 1));
    return out;
}

double RootModuli::min_ar_in_b(int s) const {
    return std::min(ar, std::pow(sar, 1.0 / static_cast<double>(std::max(s, 1))));
}

double RootModuli::min_ma_in_b(int s) const {
    return std::min(ma, std::pow(sma, 1.0 / static_cast<double>(std::max(s, 1))));
}

std::vector<double> psi_weights(std::span<const double> ar_poly,
                                std::span<const double> ma_poly, std::size_t count) {
    std::vector<double> psi(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        double v = j < ma_poly.size() ? ma_poly[j] : 0.0;
        for (std::size_t k = 1; k <= j && k < ar_poly.size(); ++k) v -= ar_poly[k] * psi[j - k];
        psi[j] = v;
    }
    return psi;
}

PolyExpansion expand(const SarimaSpec& spec, const SarimaParams& params,
                     std::size_t pi_length) {
    params.check_shape(spec);
    PolyExpansion out;
    out.ar_poly = poly_multiply(factor(params.ar, -1.0, 1), factor(params.sar, -1.0, spec.s));
    out.ma_poly = poly_multiply(factor(params.ma, 1.0, 1), factor(params.sma, 1.0, spec.s));
    if (pi_length > 0) {
        const RootModuli roots = root_moduli(params);
        if (!(roots.ma > 1.0 && roots.sma > 1.0)) {
            throw NumericalError("MA polynomial is not invertible (root modulus " +
                                 std::to_string(roots.min_ma_in_b(spec.s)) + ")");
        }
        // π(B)θ(B) = φ(B): long division of the AR by the MA polynomial.
        out.pi_weights = psi_weights(out.ma_poly, out.ar_poly, pi_length);
    }
    return out;
}

ResidualSeries conditional_residuals(const SarimaSpec& spec, const SarimaParams& params,
                                     std::span<const double> w, std::size_t conditioning) {
    const PolyExpansion poly = expand(spec, params);
    ResidualSeries out;
    out.start = std::max(spec.ar_span(), conditioning);
    if (out.start >= w.size()) {
        throw DataError("series of length " + std::to_string(w.size()) +
                        " leaves no residuals after conditioning on " +
                        std::to_string(out.start) + " values");
    }
    const double mean = params.constant.value_or(0.0);
    out.e.assign(w.size(), 0.0);
    const std::size_t nar = poly.ar_poly.size();
    const std::size_t nma = poly.ma_poly.size();
    for (std::size_t t = out.start; t < w.size(); ++t) {
        double v = w[t] - mean;
        for (std::size_t k = 1; k < nar; ++k) {
            if (poly.ar_poly[k] != 0.0) v += poly.ar_poly[k] * (w[t - k] - mean);
        }
        for (std::size_t k = 1; k < nma && k <= t; ++k) {
            if (poly.ma_poly[k] != 0.0) v -= poly.ma_poly[k] * out.e[t - k];
        }
        out.e[t] = v;
        out.sse += v * v;
    }
    return out;
}

namespace {

void require_invertible(const SarimaParams& params) {
    const RootModuli roots = root_moduli(params);
    if (!roots.outside(1.0)) {
        throw NumericalError("parameters are not stationary and invertible");
    }
}

}  // namespace

double css_objective(const SarimaSpec& spec, const SarimaParams& params,
                     std::span<const double> w, std::size_t conditioning) {
    require_invertible(params);
    const ResidualSeries r = conditional_residuals(spec, params, w, conditioning);
    return r.sse / static_cast<double>(r.count());
}

double gaussian_log_likelihood(double sse, std::size_t n, double sigma2) {
    const double nn = static_cast<double>(n);
    return -0.5 * nn * (std::log(2.0 * std::numbers::pi) + std::log(sigma2)) -
           sse / (2.0 * sigma2);
}

double log_likelihood(const SarimaSpec& spec, const SarimaParams& params,
                      std::span<const double> w, VarianceMode mode, std::size_t conditioning) {
    require_invertible(params);
    const ResidualSeries r = conditional_residuals(spec, params, w, conditioning);
    const double sigma2 =
        mode == VarianceMode::Profiled ? r.sse / static_cast<double>(r.count()) : params.sigma2;
    if (!(sigma2 > 0.0)) throw NumericalError("innovation variance must be positive");
    return gaussian_log_likelihood(r.sse, r.count(), sigma2);
}

double aic(double log_likelihood, int n_coefficients) {
    return -2.0 * log_likelihood + 2.0 * (n_coefficients + 1);
}

CoefficientTest coefficient_test(std::string name, double estimate, double std_error) {
    CoefficientTest out;
    out.name = std::move(name);
    out.estimate = estimate;
    out.std_error = std_error;
    out.z = estimate / std_error;
    const boost::math::normal standard;
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(standard, std::abs(out.z)));
    out.stars = out.p_value < 0.001 ? "***" : out.p_value < 0.01 ? "**" : out.p_value < 0.05 ? "*"
                                                                                            : "";
    return out;
}

std::vector<CoefficientTest> coefficient_tests(const FitResult& fit) {
    if (!fit.std_errors) {
        throw NumericalError("standard errors are unavailable for " + fit.spec.label());
    }
    const auto names = fit.spec.coefficient_names();
    const auto beta = fit.params.pack();
    std::vector<CoefficientTest> out;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        out.push_back(coefficient_test(names[i], beta[i], (*fit.std_errors)[i]));
    }
    return out;
}

namespace {

std::vector<double> differenced_values(const SarimaSpec& spec, const TimeSeries& ts) {
    return difference(ts, spec.d, spec.D, spec.s).values();
}

void fill_summary(FitResult& out, const SarimaSpec& spec, std::span<const double> w,
                  std::size_t conditioning) {
    const ResidualSeries r = conditional_residuals(spec, out.params, w, conditioning);
    out.residuals = r.e;
    out.conditioning = r.start;
    out.burn_in = std::max(r.start, spec.ma_span());
    out.n_used = r.count();
    out.params.sigma2 = r.sse / static_cast<double>(r.count());
    out.log_likelihood = gaussian_log_likelihood(r.sse, r.count(), out.params.sigma2);
    out.aic = aic(out.log_likelihood, spec.n_coefficients());
    const RootModuli roots = root_moduli(out.params);
    out.min_ar_root = roots.min_ar_in_b(spec.s);
    out.min_ma_root = roots.min_ma_in_b(spec.s);
}

}  // namespace

FitResult evaluate(const SarimaSpec& spec, const SarimaParams& params, const TimeSeries& ts,
                   std::size_t min_conditioning) {
    spec.validate();
    params.check_shape(spec);
    require_invertible(params);
    FitResult out;
    out.spec = spec;
    out.params = params;
    out.series = ts.values();
    out.differenced = differenced_values(spec, ts);
    out.source = ts;
    fill_summary(out, spec, out.differenced, min_conditioning);
    out.css = out.params.sigma2;
    out.converged = true;
    return out;
}

namespace {
constexpr double kBarrierMargin = 1e-3;

// One factor 1 − Σ a_k z^k with all roots outside `radius`, written through
// its partial autocorrelations r_k = tanh(u_k) of the rescaled polynomial.
std::vector<double> factor_from_free(std::span<const double> u, double radius) {
    const std::size_t m = u.size();
    std::vector<double> c(m), prev(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double r = std::tanh(u[k]);
        prev = c;
        c[k] = r;
        for (std::size_t j = 0; j < k; ++j) c[j] = prev[j] - r * prev[k - 1 - j];
    }
    double scale = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        scale /= radius;
        c[k] *= scale;
    }
    return c;
}

std::vector<double> factor_to_free(std::span<const double> a, double radius) {
    const std::size_t m = a.size();
    std::vector<double> c(a.begin(), a.end()), u(m);
    double scale = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        scale *= radius;
        c[k] *= scale;
    }
    constexpr double kEdge = 1.0 - 1e-12;
    for (std::size_t k = m; k-- > 0;) {
        const double r = std::clamp(c[k], -kEdge, kEdge);
        u[k] = std::atanh(r);
        std::vector<double> next(k);
        for (std::size_t j = 0; j < k; ++j) next[j] = (c[j] + r * c[k - 1 - j]) / (1.0 - r * r);
        c.assign(next.begin(), next.end());
    }
    return u;
}

// Packed coefficients <-> unconstrained coordinates, factor by factor. MA
// factors 1 + Σ b_k z^k are handled as 1 − Σ (−b_k) z^k.
std::vector<double> map_factors(const SarimaSpec& spec, std::span<const double> x, double radius,
                                bool to_free) {
    std::vector<double> out(x.begin(), x.end());
    std::size_t offset = 0;
    auto apply = [&](int count, double sign) {
        const auto n = static_cast<std::size_t>(count);
        std::vector<double> part(x.begin() + static_cast<std::ptrdiff_t>(offset),
                                 x.begin() + static_cast<std::ptrdiff_t>(offset + n));
        if (to_free) {
            for (double& v : part) v *= sign;
            part = factor_to_free(part, radius);
        } else {
            part = factor_from_free(part, radius);
            for (double& v : part) v *= sign;
        }
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
        offset += n;
    };
    apply(spec.p, 1.0);
    apply(spec.q, -1.0);
    apply(spec.P, 1.0);
    apply(spec.Q, -1.0);
    return out;
}

}  // namespace

FitResult fit(const SarimaSpec& spec, const TimeSeries& ts, const FitOptions& options) {
    spec.validate();
    FitResult out;
    out.spec = spec;
    out.series = ts.values();
    out.source = ts;
    out.differenced = differenced_values(spec, ts);
    const std::vector<double>& w = out.differenced;

    const std::size_t k = static_cast<std::size_t>(spec.n_coefficients());
    if (w.size() < 3 * k || (spec.is_seasonal() && w.size() < 2 * static_cast<std::size_t>(spec.s))) {
        throw DataError("insufficient data for " + spec.label() + ": " +
                        std::to_string(w.size()) + " values after differencing");
    }
    const std::size_t conditioning = std::max(spec.ar_span(), options.min_conditioning);
    if (conditioning + k + 1 > w.size()) {
        throw DataError("insufficient data for " + spec.label() + " after conditioning on " +
                        std::to_string(conditioning) + " values");
    }

    auto feasible = [&](const SarimaParams& params) {
        return root_moduli(params).outside(options.barrier_radius);
    };
    const double inf = std::numeric_limits<double>::infinity();
    const optim::Objective css = [&](std::span<const double> x) {
        const SarimaParams params = SarimaParams::unpack(spec, x);
        if (!feasible(params)) return inf;
        const ResidualSeries r = conditional_residuals(spec, params, w, conditioning);
        return r.sse / static_cast<double>(r.count());
    };
    const optim::Objective negative_loglik = [&](std::span<const double> x) {
        const SarimaParams params = SarimaParams::unpack(spec, x);
        if (!feasible(params)) return inf;
        const ResidualSeries r = conditional_residuals(spec, params, w, conditioning);
        const double sigma2 = r.sse / static_cast<double>(r.count());
        if (!(sigma2 > 0.0)) return inf;
        return -gaussian_log_likelihood(r.sse, r.count(), sigma2);
    };

    std::vector<double> start(k, options.start_value);
    if (spec.include_constant) {
        start.back() = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    }
    if (!std::isfinite(css(start))) {
        throw NumericalError("starting values are infeasible for " + spec.label());
    }

    const optim::Result stage1 = optim::nelder_mead(css, start, options.simplex);
    // Likelihood without the barrier, for curvature and for the search below.
    const optim::Objective unconstrained = [&](std::span<const double> x) {
        const SarimaParams params = SarimaParams::unpack(spec, x);
        const ResidualSeries r = conditional_residuals(spec, params, w, conditioning);
        const double sigma2 = r.sse / static_cast<double>(r.count());
        if (!(sigma2 > 0.0)) return inf;
        return -gaussian_log_likelihood(r.sse, r.count(), sigma2);
    };
    // Stage 2 searches coordinates that cannot leave the barrier region, so
    // optima on or near the barrier are approached smoothly.
    const double radius = options.barrier_radius;
    const optim::Objective free_loglik = [&](std::span<const double> u) {
        return unconstrained(map_factors(spec, u, radius, false));
    };
    const optim::Result stage2 = optim::bfgs(
        free_loglik, map_factors(spec, stage1.x, radius, true), options.quasi_newton);
    const std::vector<double> estimate = map_factors(spec, stage2.x, radius, false);

    out.params = SarimaParams::unpack(spec, estimate);
    out.css = stage1.value;
    const RootModuli roots = root_moduli(out.params);
    out.on_barrier = !roots.outside(options.barrier_radius * (1.0 + kBarrierMargin));
    out.converged = stage2.converged || (stage2.stalled && out.on_barrier);
    out.iterations = stage1.iterations + stage2.iterations;
    fill_summary(out, spec, w, conditioning);
    out.gradient_norm = optim::infinity_norm(optim::numerical_gradient(negative_loglik, estimate));

    const Eigen::MatrixXd hessian = optim::numerical_hessian(unconstrained, estimate);
    const Eigen::LLT<Eigen::MatrixXd> llt(hessian);
    if (hessian.allFinite() && llt.info() == Eigen::Success) {
        const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
        std::vector<double> se(k), z(k), pv(k);
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            const double var = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            if (!(var > 0.0) || !std::isfinite(var)) {
                ok = false;
                break;
            }
            const CoefficientTest t = coefficient_test("", estimate[i], std::sqrt(var));
            se[i] = t.std_error;
            z[i] = t.z;
            pv[i] = t.p_value;
        }
        if (ok) {
            out.std_errors = std::move(se);
            out.z_values = std::move(z);
            out.p_values = std::move(pv);
        }
    }
    return out;
}

}  // namespace bj
