#pragma once

#include "bj/optimize.hpp"
#include "bj/series.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bj {

/// Model order ARIMA(p,d,q)×(P,D,Q)_s.
struct SarimaSpec {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int s = 12;
    bool include_constant = false;

    /// Throws DataError when the order is not a valid model.
    void validate() const;
    [[nodiscard]] bool is_seasonal() const noexcept { return P + D + Q > 0; }
    /// Estimated coefficients, constant included, innovation variance excluded.
    [[nodiscard]] int n_coefficients() const noexcept {
        return p + q + P + Q + (include_constant ? 1 : 0);
    }
    /// Observations that must precede the first residual: p + P·s.
    [[nodiscard]] std::size_t ar_span() const noexcept {
        return static_cast<std::size_t>(p + P * s);
    }
    [[nodiscard]] std::size_t ma_span() const noexcept {
        return static_cast<std::size_t>(q + Q * s);
    }
    /// "ARIMA(1,1,1)x(1,0,1)[12]", with "+c" when a constant is included.
    [[nodiscard]] std::string label() const;
    /// Coefficient names in packed order: ar1.., ma1.., sar1.., sma1.., constant.
    [[nodiscard]] std::vector<std::string> coefficient_names() const;

    friend auto operator<=>(const SarimaSpec&, const SarimaSpec&) = default;
};

/// Coefficients in the convention
///   (1 − Σφ_i B^i)(1 − ΣΦ_j B^{js}) (w_t − c) = (1 + Σθ_i B^i)(1 + ΣΘ_j B^{js}) ε_t
/// where w is the differenced series and c its mean (when included).
struct SarimaParams {
    std::vector<double> ar, ma, sar, sma;
    std::optional<double> constant;
    double sigma2 = 1.0;

    /// Zero coefficients shaped for `spec`.
    static SarimaParams zeros(const SarimaSpec& spec);
    /// Packed order matches SarimaSpec::coefficient_names().
    static SarimaParams unpack(const SarimaSpec& spec, std::span<const double> packed,
                               double sigma2 = 1.0);
    [[nodiscard]] std::vector<double> pack() const;
    /// Throws DataError when the coefficient counts do not match `spec`.
    void check_shape(const SarimaSpec& spec) const;
};

/// Multiplicative polynomials expanded in powers of B.
struct PolyExpansion {
    /// Full AR polynomial φ(B)Φ(B^s); ar_poly[0] == 1.
    std::vector<double> ar_poly;
    /// Full MA polynomial θ(B)Θ(B^s); ma_poly[0] == 1.
    std::vector<double> ma_poly;
    /// Weights of φ(B)Φ(B^s)/θ(B)Θ(B^s): e_t = Σ_j pi_weights[j]·x_{t−j}.
    std::vector<double> pi_weights;

    /// Coefficient on x_{t−k} in the autoregression x_t = Σ a_k x_{t−k} + ...
    [[nodiscard]] double ar_lag(std::size_t k) const {
        return k < ar_poly.size() ? -ar_poly[k] : 0.0;
    }
};

std::vector<double> poly_multiply(std::span<const double> a, std::span<const double> b);

/// Smallest modulus among the roots of c[0] + c[1]z + ... + c[m]z^m (c[0] == 1);
/// +inf for a constant polynomial.
double min_root_modulus(std::span<const double> poly);

/// Expands the multiplicative polynomials; pi weights are produced up to
/// `pi_length` terms. Throws NumericalError when the MA polynomial has a root
/// on or inside the unit circle.
PolyExpansion expand(const SarimaSpec& spec, const SarimaParams& params,
                     std::size_t pi_length = 0);

/// ψ weights of θ(B)/φ(B), i.e. the MA(∞) form, `count` terms starting at ψ_0 = 1.
std::vector<double> psi_weights(std::span<const double> ar_poly,
                                std::span<const double> ma_poly, std::size_t count);

/// Per-factor minimum root moduli, each in its own lag variable (B for the
/// regular factors, B^s for the seasonal ones).
struct RootModuli {
    double ar = 0.0, ma = 0.0, sar = 0.0, sma = 0.0;

    [[nodiscard]] double min_ar_in_b(int s) const;
    [[nodiscard]] double min_ma_in_b(int s) const;
    /// True when every factor's roots lie strictly outside `radius`.
    [[nodiscard]] bool outside(double radius) const noexcept {
        return ar > radius && ma > radius && sar > radius && sma > radius;
    }
};

RootModuli root_moduli(const SarimaParams& params);

struct ResidualSeries {
    std::vector<double> e;   // same length as the input; zero before `start`
    std::size_t start = 0;   // first residual computed from observed lags
    double sse = 0.0;        // Σ e_t² over t ≥ start
    [[nodiscard]] std::size_t count() const noexcept { return e.size() - start; }
};

/// One-step innovations of the differenced series `w` with zero pre-sample
/// errors, conditioning on the first max(p + P·s, conditioning) observations.
ResidualSeries conditional_residuals(const SarimaSpec& spec, const SarimaParams& params,
                                     std::span<const double> w, std::size_t conditioning = 0);

/// Conditional sum of squares: mean squared residual on the differenced series.
/// Throws NumericalError for non-stationary or non-invertible parameters.
double css_objective(const SarimaSpec& spec, const SarimaParams& params,
                     std::span<const double> w, std::size_t conditioning = 0);

enum class VarianceMode {
    Profiled,  // σ² replaced by Σε²/n
    Given,     // σ² taken from params.sigma2
};

/// Gaussian conditional log-likelihood of the differenced series `w`.
double log_likelihood(const SarimaSpec& spec, const SarimaParams& params,
                      std::span<const double> w, VarianceMode mode = VarianceMode::Profiled,
                      std::size_t conditioning = 0);

/// Gaussian log-likelihood from the residual sum of squares.
double gaussian_log_likelihood(double sse, std::size_t n, double sigma2);

/// −2·lnL + 2·(n_coefficients + 1); the innovation variance counts as a parameter.
double aic(double log_likelihood, int n_coefficients);

struct FitOptions {
    double start_value = 0.1;
    double barrier_radius = 1.001;
    /// Lower bound on conditioning observations, so that candidates in a
    /// search share one likelihood sample.
    std::size_t min_conditioning = 0;
    optim::NelderMeadOptions simplex{};
    optim::BfgsOptions quasi_newton{};
};

struct FitResult {
    SarimaSpec spec;
    SarimaParams params;
    std::optional<std::vector<double>> std_errors;  // absent when the Hessian is not PD
    std::optional<std::vector<double>> z_values;
    std::optional<std::vector<double>> p_values;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double css = 0.0;                 // stage-1 objective at its minimum
    std::vector<double> residuals;    // aligned with `differenced`; zero before `conditioning`
    std::size_t conditioning = 0;     // residuals before this index are not computed
    std::size_t burn_in = 0;          // residuals before this index are excluded from diagnostics
    std::size_t n_used = 0;           // residuals entering the likelihood
    /// Stopped before the iteration limit: a stationary point, or a point on
    /// the root barrier where no feasible step improves the likelihood.
    bool converged = false;
    bool on_barrier = false;
    int iterations = 0;
    double gradient_norm = 0.0;       // infinity norm of ∇(−lnL) at the optimum
    double min_ar_root = 0.0;         // smallest AR root modulus in B
    double min_ma_root = 0.0;         // smallest MA root modulus in B
    std::vector<double> series;       // modelled (transformed, undifferenced) values
    std::vector<double> differenced;
    std::optional<TimeSeries> source;  // series as passed to fit(), with its transform history

    /// Residuals from `burn_in` on.
    [[nodiscard]] std::span<const double> effective_residuals() const {
        return std::span<const double>(residuals).subspan(burn_in);
    }
};

/// Two-stage estimation: conditional sum of squares by simplex search from
/// neutral starting values, then the conditional Gaussian likelihood by
/// quasi-Newton iteration, with standard errors from the numerical Hessian.
FitResult fit(const SarimaSpec& spec, const TimeSeries& ts, const FitOptions& options = {});

/// FitResult for fixed parameters (no optimisation, no standard errors).
FitResult evaluate(const SarimaSpec& spec, const SarimaParams& params, const TimeSeries& ts,
                   std::size_t min_conditioning = 0);

struct CoefficientTest {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    std::string stars;  // "***" p < 0.001, "**" p < 0.01, "*" p < 0.05
};

CoefficientTest coefficient_test(std::string name, double estimate, double std_error);
/// Throws NumericalError when the fit has no standard errors.
std::vector<CoefficientTest> coefficient_tests(const FitResult& fit);

}  // namespace bj
