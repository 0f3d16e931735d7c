#include "bj/diagnostics.hpp"

#include "bj/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bj {

double chi_square_survival(double x, double df) {
    if (!(df > 0.0)) throw DataError("chi-square degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

LjungBoxResult ljung_box(std::span<const double> residuals, int m, int fitdf) {
    const int n = static_cast<int>(residuals.size());
    if (!(fitdf >= 0 && m > fitdf && n > m)) {
        throw DataError("Ljung-Box requires n > m > fitdf >= 0 (n=" + std::to_string(n) +
                        ", m=" + std::to_string(m) + ", fitdf=" + std::to_string(fitdf) + ")");
    }
    const CorrelogramResult r = acf(residuals, static_cast<std::size_t>(m));
    double sum = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double rk = r.values[static_cast<std::size_t>(k - 1)];
        sum += rk * rk / static_cast<double>(n - k);
    }
    LjungBoxResult out;
    out.q_statistic = static_cast<double>(n) * (n + 2.0) * sum;
    out.m = m;
    out.fitdf = fitdf;
    out.df = m - fitdf;
    out.p_value = chi_square_survival(out.q_statistic, out.df);
    return out;
}

namespace {

// Evaluates cc[0] + cc[1]x + ... + cc[nord-1]x^(nord-1).
double poly(const double* cc, int nord, double x) {
    double ret = cc[0];
    if (nord > 1) {
        double p = x * cc[nord - 1];
        for (int j = nord - 2; j > 0; --j) p = (p + cc[j]) * x;
        ret += p;
    }
    return ret;
}

int sign_of(int v) { return (v > 0) - (v < 0); }

}  // namespace

// Royston (1995), Algorithm AS R94.
ShapiroWilkResult shapiro_wilk(std::span<const double> sample) {
    const int n = static_cast<int>(sample.size());
    if (n < 3 || n > 5000) {
        throw DataError("Shapiro-Wilk requires 3 <= n <= 5000, got n=" + std::to_string(n));
    }
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x[n - 1] - x[0];
    if (range < 1e-19 * std::max(1.0, std::abs(x[0]))) {
        throw DataError("Shapiro-Wilk is undefined for a constant sample");
    }

    static constexpr double g[2] = {-2.273, .459};
    static constexpr double c1[6] = {0., .221157, -.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[6] = {0., .042981, -.293762, -1.752461, 5.682633, -3.582633};
    static constexpr double c3[4] = {.544, -.39978, .025054, -6.714e-4};
    static constexpr double c4[4] = {1.3822, -.77857, .062767, -.0020322};
    static constexpr double c5[4] = {-1.5861, -.31082, -.083751, .0038915};
    static constexpr double c6[3] = {-.4803, -.082676, .0030302};

    const boost::math::normal standard;
    const int nn2 = n / 2;
    const double an = static_cast<double>(n);
    std::vector<double> a(static_cast<std::size_t>(nn2) + 1, 0.0);  // 1-based

    if (n == 3) {
        a[1] = std::sqrt(0.5);
    } else {
        const double an25 = an + .25;
        double summ2 = 0.0;
        for (int i = 1; i <= nn2; ++i) {
            a[i] = boost::math::quantile(standard, (i - .375) / an25);
            summ2 += a[i] * a[i];
        }
        summ2 *= 2.;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1. / std::sqrt(an);
        const double a1 = poly(c1, 6, rsn) - a[1] / ssumm2;

        int i1;
        double fac;
        if (n > 5) {
            i1 = 3;
            const double a2 = -a[2] / ssumm2 + poly(c2, 6, rsn);
            fac = std::sqrt((summ2 - 2. * (a[1] * a[1]) - 2. * (a[2] * a[2])) /
                            (1. - 2. * (a1 * a1) - 2. * (a2 * a2)));
            a[2] = a2;
        } else {
            i1 = 2;
            fac = std::sqrt((summ2 - 2. * (a[1] * a[1])) / (1. - 2. * (a1 * a1)));
        }
        a[1] = a1;
        for (int i = i1; i <= nn2; ++i) a[i] /= -fac;
    }

    double xx = x[0] / range;
    double sx = xx;
    double sa = -a[1];
    for (int i = 1, j = n - 1; i < n; --j) {
        const double xi = x[i] / range;
        sx += xi;
        ++i;
        if (i != j) sa += sign_of(i - j) * a[std::min(i, j)];
        xx = xi;
    }
    sa /= n;
    sx /= n;
    double ssa = 0., ssx = 0., sax = 0.;
    for (int i = 0, j = n - 1; i < n; ++i, --j) {
        const double asa = i != j ? sign_of(i - j) * a[1 + std::min(i, j)] - sa : -sa;
        const double xsx = x[i] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }

    // w1 is 1 − W, computed directly to avoid cancellation when W is near 1.
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

    ShapiroWilkResult out;
    out.n = static_cast<std::size_t>(n);
    out.w_statistic = 1. - w1;

    if (n == 3) {
        constexpr double pi6 = 1.90985931710274;  // 6/π
        constexpr double stqr = 1.04719755119660; // asin(sqrt(3/4))
        out.p_value = std::max(0.0, pi6 * (std::asin(std::sqrt(out.w_statistic)) - stqr));
        return out;
    }
    double y = std::log(w1);
    const double lxx = std::log(an);
    double m, s;
    if (n <= 11) {
        const double gamma = poly(g, 2, an);
        if (y >= gamma) {
            out.p_value = 1e-99;
            return out;
        }
        y = -std::log(gamma - y);
        m = poly(c3, 4, an);
        s = std::exp(poly(c4, 4, an));
    } else {
        m = poly(c5, 4, lxx);
        s = std::exp(poly(c6, 3, lxx));
    }
    out.p_value = boost::math::cdf(boost::math::complement(boost::math::normal(m, s), y));
    return out;
}

DiagnosticsReport diagnose_residuals(std::span<const double> residuals, int m, int fitdf,
                                     double alpha) {
    if (residuals.empty()) throw DataError("no residuals left after burn-in");
    DiagnosticsReport out;
    out.alpha = alpha;
    out.ljung_box = ljung_box(residuals, m, 0);
    out.ljung_box_adjusted = ljung_box(residuals, m, fitdf);
    out.shapiro_wilk = shapiro_wilk(residuals);
    out.residual_acf = acf(residuals, static_cast<std::size_t>(m), alpha);
    out.residual_pacf = pacf(residuals, static_cast<std::size_t>(m), alpha);
    out.all_lags_within_bounds =
        out.residual_acf.exceedances() == 0 && out.residual_pacf.exceedances() == 0;
    out.ljung_box_pass = out.ljung_box.p_value >= alpha;
    out.shapiro_wilk_pass = out.shapiro_wilk.p_value >= alpha;
    out.correlogram_pass = out.all_lags_within_bounds;
    out.overall_pass = out.ljung_box_pass && out.shapiro_wilk_pass;
    return out;
}

DiagnosticsReport diagnose(const FitResult& fit, int m, double alpha) {
    return diagnose_residuals(fit.effective_residuals(), m, fit.spec.n_coefficients(), alpha);
}

}  // namespace bj
