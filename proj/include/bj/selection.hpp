#pragma once

#include "bj/diagnostics.hpp"
#include "bj/sarima.hpp"
#include "bj/series.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bj {

struct GridBounds {
    int max_p = 2, max_q = 2, max_P = 2, max_Q = 2;
    std::vector<int> d_values{1};
    std::vector<int> D_values{0, 1};
    int s = 12;
};

/// Every valid spec within `bounds`, in lexicographic order. A constant is
/// included only for undifferenced models.
std::vector<SarimaSpec> enumerate_grid(const GridBounds& bounds);

struct SelectionOptions {
    std::size_t top_k = 2;
    int diagnostic_lags = 20;
    /// Worker threads for candidate fits; 0 uses the hardware concurrency.
    unsigned threads = 0;
    /// Original-scale index of the first residual shared by all candidates;
    /// defaults to the largest p + P·s + d + D·s in the grid.
    std::optional<std::size_t> residual_origin;
    FitOptions fit{};
};

struct Candidate {
    SarimaSpec spec;
    std::optional<FitResult> fit;
    std::optional<DiagnosticsReport> diagnostics;
    std::optional<double> aic;
    std::optional<double> rmse;  // only for the candidates evaluated on the holdout
    bool converged = false;
    std::string error;           // why the fit or evaluation failed, if it did
};

struct SelectionReport {
    std::vector<Candidate> candidates;  // in grid order
    std::vector<std::size_t> ranking;   // successful fits, AIC ascending
    std::vector<std::size_t> evaluated; // top_k converged candidates by AIC
    std::size_t chosen = 0;             // index into candidates

    [[nodiscard]] const Candidate& chosen_candidate() const { return candidates.at(chosen); }
};

/// Fits every spec on `train` (modelling scale), ranks by AIC, scores the
/// top-k converged fits by holdout RMSE against `test` (original scale) and
/// picks the RMSE winner. Ties go to fewer coefficients, then spec order.
SelectionReport select_model(const TimeSeries& train, const TimeSeries& test,
                             const std::vector<SarimaSpec>& specs,
                             const SelectionOptions& options = {});

SelectionReport grid_search(const TimeSeries& train, const TimeSeries& test,
                            const GridBounds& bounds, const SelectionOptions& options = {});

}  // namespace bj
