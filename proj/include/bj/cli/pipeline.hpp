#pragma once

#include "bj/cli/dataset.hpp"
#include "bj/diagnostics.hpp"
#include "bj/earnings.hpp"
#include "bj/forecasting.hpp"
#include "bj/sarima.hpp"
#include "bj/selection.hpp"
#include "bj/simulate.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace bj::cli {

using Json = nlohmann::ordered_json;

/// Relative path -> file body. Built completely in memory before anything
/// touches the output directory.
using FileSet = std::map<std::string, std::string>;

enum class BoxCoxMode { Auto, Explicit, None };

struct RunConfig {
    /// Last training month; defaults to twelve months before the end.
    std::optional<YearMonth> split;
    BoxCoxMode boxcox_mode = BoxCoxMode::Auto;
    double lambda = 0.0;  // used when boxcox_mode == Explicit
    BoxCoxVariant variant = BoxCoxVariant::Shifted;
    int period = 12;

    /// Regular differencing order; chosen from ADF tests when unset.
    std::optional<int> d;
    GridBounds grid{};
    std::size_t top_k = 2;
    unsigned threads = 1;

    /// Explicit model for the single-model commands (fit, diagnose, forecast, earnings).
    std::optional<SarimaSpec> model;

    std::optional<std::size_t> max_lag;  // correlogram plots
    int diagnostic_lags = 20;
    int horizon = 12;
    double level = 0.95;
    bool bias_adjust = false;

    EarningsAssumptions earnings{};
    bool earnings_window_set = false;  // otherwise the whole forecast horizon

    void validate(const TimeSeries& series) const;
};

/// Training/holdout split and the modelling-scale transform.
struct PreparedData {
    TimeSeries full;
    TimeSeries train;
    TimeSeries test;
    std::optional<double> lambda;
    BoxCoxVariant variant = BoxCoxVariant::Shifted;
    TimeSeries model_train;  // train after Box-Cox
    TimeSeries model_full;   // full series after Box-Cox
};

PreparedData prepare(const TimeSeries& series, const RunConfig& config);

struct IdentifyOutput {
    Json report;
    FileSet files;
    int d = 0;
};

IdentifyOutput identify(const PreparedData& data, const RunConfig& config);

Json fit_to_json(const FitResult& fit);
Json diagnostics_to_json(const DiagnosticsReport& report);
std::string correlogram_csv(const CorrelogramResult& result);

/// Emits `files` under `out_dir` atomically per stage directory: everything
/// is written to a scratch directory first and moved into place only when
/// every write succeeded.
void write_files(const FileSet& files, const std::filesystem::path& out_dir);

struct StageResult {
    Json report;
    FileSet files;
};

StageResult run_fit(const PreparedData& data, const RunConfig& config);
StageResult run_diagnose(const PreparedData& data, const RunConfig& config);
StageResult run_select(const PreparedData& data, const RunConfig& config);
StageResult run_forecast(const PreparedData& data, const RunConfig& config);
StageResult run_earnings(const PreparedData& data, const RunConfig& config);

/// Identification, selection, diagnostics, forecasting and earnings in one
/// pass. Nothing is written on failure.
StageResult run_pipeline(const IngestedDataset& dataset, const RunConfig& config);

}  // namespace bj::cli
