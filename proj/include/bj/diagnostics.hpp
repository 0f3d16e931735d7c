#pragma once

#include "bj/correlogram.hpp"
#include "bj/sarima.hpp"

#include <cstddef>
#include <span>

namespace bj {

struct LjungBoxResult {
    double q_statistic = 0.0;
    int m = 0;       // lags tested
    int fitdf = 0;   // degrees of freedom removed for fitted coefficients
    int df = 0;      // m − fitdf
    double p_value = 1.0;
};

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_survival(double x, double df);

/// Q* = n(n+2) Σ_{k=1}^{m} r_k² / (n − k), referred to χ²(m − fitdf).
LjungBoxResult ljung_box(std::span<const double> residuals, int m, int fitdf = 0);

struct ShapiroWilkResult {
    double w_statistic = 1.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Shapiro-Wilk W with Royston's normalising approximation for the p-value
/// (valid for 3 ≤ n ≤ 5000).
ShapiroWilkResult shapiro_wilk(std::span<const double> sample);

struct DiagnosticsReport {
    /// Reference distribution χ²(m), the convention the headline verdict uses.
    LjungBoxResult ljung_box;
    /// Same statistic referred to χ²(m − #coefficients).
    LjungBoxResult ljung_box_adjusted;
    ShapiroWilkResult shapiro_wilk;
    CorrelogramResult residual_acf;
    CorrelogramResult residual_pacf;
    bool all_lags_within_bounds = false;
    double alpha = 0.05;

    bool ljung_box_pass = false;
    bool shapiro_wilk_pass = false;
    /// Informational: with 2m lags some excursions are expected under white noise.
    bool correlogram_pass = false;
    /// Ljung-Box and Shapiro-Wilk both pass.
    bool overall_pass = false;
};

/// Residual checks on the post-burn-in residuals of a fit.
DiagnosticsReport diagnose(const FitResult& fit, int m = 20, double alpha = 0.05);
/// Same checks on a bare residual vector; `fitdf` feeds the adjusted Ljung-Box.
DiagnosticsReport diagnose_residuals(std::span<const double> residuals, int m = 20,
                                     int fitdf = 0, double alpha = 0.05);

}  // namespace bj
