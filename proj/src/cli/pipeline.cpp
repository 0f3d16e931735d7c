#include "bj/cli/pipeline.hpp"

#include "bj/correlogram.hpp"
#include "bj/errors.hpp"
#include "bj/stationarity.hpp"

#include <fstream>
#include <set>
#include <system_error>

namespace bj::cli {

namespace fs = std::filesystem;

void RunConfig::validate(const TimeSeries& series) const {
    if (horizon < 1) throw DataError("forecast horizon must be at least 1");
    if (!(level > 0.0 && level < 1.0)) throw DataError("interval level must lie in (0, 1)");
    if (period < 2) throw DataError("season length must be at least 2");
    if (top_k < 1) throw DataError("top-k must be at least 1");
    if (diagnostic_lags < 1) throw DataError("diagnostic lags must be at least 1");
    if (split && (*split < series.start() || !(*split < series.end()))) {
        throw DataError("split boundary " + split->to_string() + " is outside the data span " +
                        series.start().to_string() + ".." + series.end().to_string());
    }
    if (d && (*d < 0 || *d > 2)) throw DataError("differencing order must be 0, 1 or 2");
    if (earnings_window_set) earnings.validate();
}

PreparedData prepare(const TimeSeries& series, const RunConfig& config) {
    config.validate(series);
    const YearMonth boundary = config.split.value_or(series.end().plus(-12));
    auto [train, test] = split_at(series, boundary);

    std::optional<double> lambda;
    switch (config.boxcox_mode) {
        case BoxCoxMode::Auto: lambda = select_lambda(train, config.period); break;
        case BoxCoxMode::Explicit: lambda = config.lambda; break;
        case BoxCoxMode::None: break;
    }
    TimeSeries model_train = lambda ? boxcox(train, *lambda, config.variant) : train;
    TimeSeries model_full = lambda ? boxcox(series, *lambda, config.variant) : series;
    return PreparedData{series, std::move(train), std::move(test), lambda, config.variant,
                        std::move(model_train), std::move(model_full)};
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json adf_to_json(const AdfResult& r) {
    return Json{{"statistic", r.statistic},
                {"lag_order", r.lag_order},
                {"p_value", r.p_value},
                {"p_value_clamped", r.p_value_clamped},
                {"reject_unit_root_at_05", r.reject_unit_root_at_05}};
}

Json correlogram_to_json(const CorrelogramResult& r) {
    return Json{{"n", r.n}, {"bound", r.bound}, {"values", r.values},
                {"exceedances", r.exceedances()}};
}

Json ljung_box_to_json(const LjungBoxResult& r) {
    return Json{{"q_statistic", r.q_statistic}, {"m", r.m}, {"fitdf", r.fitdf},
                {"df", r.df}, {"p_value", r.p_value}};
}

Json spec_to_json(const SarimaSpec& s) {
    return Json{{"label", s.label()}, {"p", s.p}, {"d", s.d}, {"q", s.q}, {"P", s.P},
                {"D", s.D}, {"Q", s.Q}, {"s", s.s}, {"include_constant", s.include_constant}};
}

std::string_view variant_name(BoxCoxVariant v) {
    return v == BoxCoxVariant::Shifted ? "shifted" : "power";
}

Json transform_to_json(const PreparedData& data) {
    Json out{{"boxcox", data.lambda.has_value()}};
    if (data.lambda) {
        out["lambda"] = *data.lambda;
        out["variant"] = variant_name(data.variant);
    }
    return out;
}

const SarimaSpec& require_model(const RunConfig& config) {
    if (!config.model) throw DataError("this command needs a model order (--order)");
    return *config.model;
}

StageResult diagnose_stage(const FitResult& fit, const RunConfig& config) {
    const DiagnosticsReport report = diagnose(fit, config.diagnostic_lags);
    StageResult out;
    out.report = diagnostics_to_json(report);
    out.report["model"] = fit.spec.label();
    out.report["burn_in"] = fit.burn_in;

    const int consumed = fit.spec.d + fit.spec.D * fit.spec.s;
    const YearMonth origin = fit.source ? fit.source->start() : YearMonth{};
    std::string csv = "month,fitted,residual\n";
    for (std::size_t t = fit.burn_in; t < fit.residuals.size(); ++t) {
        const std::size_t at = t + static_cast<std::size_t>(consumed);
        csv += origin.plus(static_cast<int>(at)).to_string() + "," +
               format_number(fit.series[at] - fit.residuals[t]) + "," +
               format_number(fit.residuals[t]) + "\n";
    }
    out.files["diagnostics/diagnostics.json"] = out.report.dump(2) + "\n";
    out.files["diagnostics/residuals.csv"] = csv;
    out.files["diagnostics/residual_acf.csv"] = correlogram_csv(report.residual_acf);
    out.files["diagnostics/residual_pacf.csv"] = correlogram_csv(report.residual_pacf);
    return out;
}

struct ForecastStage {
    StageResult stage;
    ForecastResult future;
};

ForecastStage forecast_stage(const PreparedData& data, const RunConfig& config,
                             const FitResult& train_fit) {
    ForecastOptions options;
    options.level = config.level;
    options.bias_adjust = config.bias_adjust;

    const ForecastResult holdout = forecast(train_fit, static_cast<int>(data.test.size()), options);
    const AccuracyResult accuracy = rmse(holdout.point, data.test.values());
    std::string holdout_csv = "month,actual,forecast,lower,upper,error\n";
    for (int i = 0; i < holdout.horizon; ++i) {
        const auto k = static_cast<std::size_t>(i);
        holdout_csv += holdout.month_at(i).to_string() + "," + format_number(data.test[k]) + "," +
                       format_number(holdout.point[k]) + "," + format_number(holdout.lower[k]) +
                       "," + format_number(holdout.upper[k]) + "," +
                       format_number(holdout.point[k] - data.test[k]) + "\n";
    }

    FitOptions refit_options;
    refit_options.min_conditioning = train_fit.conditioning;
    const FitResult full_fit = fit(train_fit.spec, data.model_full, refit_options);
    ForecastResult future = forecast(full_fit, config.horizon, options);

    std::string csv =
        "month,point,lower,upper,lower_clamped,transformed_point,transformed_lower,"
        "transformed_upper\n";
    for (int i = 0; i < future.horizon; ++i) {
        const auto k = static_cast<std::size_t>(i);
        csv += future.month_at(i).to_string() + "," + format_number(future.point[k]) + "," +
               format_number(future.lower[k]) + "," + format_number(future.upper[k]) + "," +
               (future.lower_clamped[k] ? "1" : "0") + "," +
               format_number(future.transformed_point[k]) + "," +
               format_number(future.transformed_lower[k]) + "," +
               format_number(future.transformed_upper[k]) + "\n";
    }

    ForecastStage out{{}, std::move(future)};
    out.stage.report = Json{
        {"model", train_fit.spec.label()},
        {"level", config.level},
        {"bias_adjust", config.bias_adjust},
        {"holdout", Json{{"start", holdout.start.to_string()},
                         {"n", accuracy.n},
                         {"rmse", accuracy.rmse}}},
        {"refit", fit_to_json(full_fit)},
        {"horizon", out.future.horizon},
        {"start", out.future.start.to_string()},
        {"clamped_lower_bounds",
         std::count(out.future.lower_clamped.begin(), out.future.lower_clamped.end(), true)},
    };
    out.stage.files["forecast/holdout.csv"] = holdout_csv;
    out.stage.files["forecast/forecast.csv"] = csv;
    out.stage.files["forecast/forecast.json"] = out.stage.report.dump(2) + "\n";
    return out;
}

StageResult earnings_stage(const ForecastResult& future, const RunConfig& config) {
    EarningsAssumptions assumptions = config.earnings;
    if (!config.earnings_window_set) {
        assumptions.window_start = future.start;
        assumptions.window_end = future.month_at(future.horizon - 1);
    }
    const EarningsProjection projection = project_loss(future, assumptions);
    std::string csv = "month,arrivals,loss\n";
    for (std::size_t i = 0; i < projection.months.size(); ++i) {
        csv += projection.months[i].to_string() + "," + format_number(projection.arrivals_used[i]) +
               "," + format_number(projection.monthly_loss[i]) + "\n";
    }
    StageResult out;
    out.report = Json{{"ade", assumptions.ade},
                      {"alos", assumptions.alos},
                      {"round_alos", assumptions.round_alos},
                      {"nights", projection.nights},
                      {"window_start", assumptions.window_start.to_string()},
                      {"window_end", assumptions.window_end.to_string()},
                      {"months", projection.months.size()},
                      {"total_loss", projection.total_loss}};
    out.files["earnings/monthly_loss.csv"] = csv;
    out.files["earnings/earnings.json"] = out.report.dump(2) + "\n";
    return out;
}

void merge(FileSet& into, const FileSet& from) {
    for (const auto& [k, v] : from) into[k] = v;
}

}  // namespace

std::string correlogram_csv(const CorrelogramResult& result) {
    std::string out = "lag,value,lower_bound,upper_bound\n";
    const std::string lo = format_number(-result.bound), hi = format_number(result.bound);
    for (std::size_t k = 1; k <= result.max_lag(); ++k) {
        out += std::to_string(k) + "," + format_number(result.at_lag(k)) + "," + lo + "," + hi + "\n";
    }
    return out;
}

Json fit_to_json(const FitResult& fit) {
    Json coefficients = Json::array();
    const auto names = fit.spec.coefficient_names();
    const auto beta = fit.params.pack();
    for (std::size_t i = 0; i < beta.size(); ++i) {
        Json row{{"name", names[i]}, {"estimate", beta[i]}};
        if (fit.std_errors) {
            const CoefficientTest t = coefficient_test(names[i], beta[i], (*fit.std_errors)[i]);
            row["std_error"] = t.std_error;
            row["z"] = t.z;
            row["p_value"] = t.p_value;
            row["significance"] = t.stars;
        }
        coefficients.push_back(std::move(row));
    }
    return Json{{"model", spec_to_json(fit.spec)},
                {"coefficients", std::move(coefficients)},
                {"standard_errors_available", fit.std_errors.has_value()},
                {"sigma2", fit.params.sigma2},
                {"log_likelihood", fit.log_likelihood},
                {"aic", fit.aic},
                {"css", fit.css},
                {"n_used", fit.n_used},
                {"conditioning", fit.conditioning},
                {"burn_in", fit.burn_in},
                {"converged", fit.converged},
                {"iterations", fit.iterations},
                {"gradient_norm", fit.gradient_norm},
                {"min_ar_root_modulus", fit.min_ar_root},
                {"min_ma_root_modulus", fit.min_ma_root}};
}

Json diagnostics_to_json(const DiagnosticsReport& r) {
    return Json{{"alpha", r.alpha},
                {"ljung_box", ljung_box_to_json(r.ljung_box)},
                {"ljung_box_adjusted", ljung_box_to_json(r.ljung_box_adjusted)},
                {"shapiro_wilk", Json{{"w", r.shapiro_wilk.w_statistic},
                                      {"p_value", r.shapiro_wilk.p_value},
                                      {"n", r.shapiro_wilk.n}}},
                {"residual_acf", correlogram_to_json(r.residual_acf)},
                {"residual_pacf", correlogram_to_json(r.residual_pacf)},
                {"all_lags_within_bounds", r.all_lags_within_bounds},
                {"verdict", Json{{"ljung_box", r.ljung_box_pass ? "pass" : "fail"},
                                 {"shapiro_wilk", r.shapiro_wilk_pass ? "pass" : "fail"},
                                 {"correlogram", r.correlogram_pass ? "pass" : "fail"},
                                 {"overall", r.overall_pass ? "pass" : "fail"}}}};
}

IdentifyOutput identify(const PreparedData& data, const RunConfig& config) {
    IdentifyOutput out;
    const auto lags_for = [&](std::size_t n) {
        return std::min(config.max_lag.value_or(default_max_lag(n)), n - 1);
    };

    const AdfResult adf_raw = adf_test(data.train);
    const AdfResult adf_model = adf_test(data.model_train);
    Json adf_steps = Json::array();
    if (config.d) {
        out.d = *config.d;
    } else {
        AdfResult current = adf_model;
        while (out.d < 2 && !current.reject_unit_root_at_05) {
            ++out.d;
            try {
                current = adf_test(difference(data.model_train, out.d, 0, config.period));
            } catch (const DataError&) {
                break;
            }
            adf_steps.push_back(Json{{"d", out.d}, {"adf", adf_to_json(current)}});
        }
    }
    const TimeSeries stationary = difference(data.model_train, out.d, 0, config.period);

    const auto raw_acf = acf(data.train, lags_for(data.train.size()));
    const auto raw_pacf = pacf(data.train, lags_for(data.train.size()));
    const auto model_acf = acf(stationary, lags_for(stationary.size()));
    const auto model_pacf = pacf(stationary, lags_for(stationary.size()));

    std::string series_csv = "month,arrivals,transformed,split\n";
    for (std::size_t i = 0; i < data.full.size(); ++i) {
        series_csv += data.full.month_at(i).to_string() + "," + format_number(data.full[i]) + "," +
                      format_number(data.model_full[i]) + "," +
                      (i < data.train.size() ? "train" : "test") + "\n";
    }

    out.report = Json{{"n", data.full.size()},
                      {"start", data.full.start().to_string()},
                      {"end", data.full.end().to_string()},
                      {"train", Json{{"n", data.train.size()}, {"end", data.train.end().to_string()}}},
                      {"test", Json{{"n", data.test.size()}, {"start", data.test.start().to_string()}}},
                      {"transform", transform_to_json(data)},
                      {"adf_raw", adf_to_json(adf_raw)},
                      {"adf_transformed", adf_to_json(adf_model)},
                      {"adf_differenced", adf_steps},
                      {"d", out.d},
                      {"d_source", config.d ? "configured" : "adf"},
                      {"raw_acf_exceedances", raw_acf.exceedances()},
                      {"differenced_acf_exceedances", model_acf.exceedances()}};
    out.files["identify/series.csv"] = series_csv;
    out.files["identify/acf_raw.csv"] = correlogram_csv(raw_acf);
    out.files["identify/pacf_raw.csv"] = correlogram_csv(raw_pacf);
    out.files["identify/acf_transformed.csv"] = correlogram_csv(model_acf);
    out.files["identify/pacf_transformed.csv"] = correlogram_csv(model_pacf);
    out.files["identify/identify.json"] = out.report.dump(2) + "\n";
    return out;
}

void write_files(const FileSet& files, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    const fs::path scratch = out_dir / ".staging";
    fs::remove_all(scratch, ec);

    std::set<std::string> top_level;
    try {
        for (const auto& [rel, body] : files) {
            const fs::path target = scratch / rel;
            fs::create_directories(target.parent_path());
            std::ofstream out(target, std::ios::binary);
            out << body;
            out.close();
            if (!out) throw DataError("cannot write " + target.string());
            top_level.insert(fs::path(rel).begin()->string());
        }
        for (const auto& dir : top_level) {
            fs::remove_all(out_dir / dir);
            fs::rename(scratch / dir, out_dir / dir);
        }
    } catch (const fs::filesystem_error& ex) {
        fs::remove_all(scratch, ec);
        throw DataError(std::string("output directory not writable: ") + ex.what());
    } catch (...) {
        fs::remove_all(scratch, ec);
        throw;
    }
    fs::remove_all(scratch, ec);
}

StageResult run_fit(const PreparedData& data, const RunConfig& config) {
    const FitResult result = fit(require_model(config), data.model_train);
    StageResult out;
    out.report = fit_to_json(result);
    out.report["transform"] = transform_to_json(data);
    out.files["fit/fit.json"] = out.report.dump(2) + "\n";
    return out;
}

StageResult run_diagnose(const PreparedData& data, const RunConfig& config) {
    const FitResult result = fit(require_model(config), data.model_train);
    return diagnose_stage(result, config);
}

namespace {

struct SelectStage {
    StageResult stage;
    FitResult chosen;
};

SelectStage select_stage(const PreparedData& data, const RunConfig& config) {
    const IdentifyOutput ident = identify(data, config);
    GridBounds bounds = config.grid;
    bounds.d_values = {ident.d};
    bounds.s = config.period;
    SelectionOptions options;
    options.top_k = config.top_k;
    options.diagnostic_lags = config.diagnostic_lags;
    options.threads = config.threads;
    const SelectionReport report = grid_search(data.model_train, data.test, bounds, options);

    std::string csv =
        "model,p,d,q,P,D,Q,s,constant,converged,log_likelihood,aic,aic_rank,rmse,ljung_box_p,"
        "shapiro_wilk_p,chosen,error\n";
    std::vector<std::size_t> rank_of(report.candidates.size(), 0);
    for (std::size_t r = 0; r < report.ranking.size(); ++r) rank_of[report.ranking[r]] = r + 1;
    for (std::size_t i = 0; i < report.candidates.size(); ++i) {
        const Candidate& c = report.candidates[i];
        const auto opt = [](const std::optional<double>& v) {
            return v ? format_number(*v) : std::string();
        };
        csv += c.spec.label() + "," + std::to_string(c.spec.p) + "," + std::to_string(c.spec.d) +
               "," + std::to_string(c.spec.q) + "," + std::to_string(c.spec.P) + "," +
               std::to_string(c.spec.D) + "," + std::to_string(c.spec.Q) + "," +
               std::to_string(c.spec.s) + "," + (c.spec.include_constant ? "1" : "0") + "," +
               (c.converged ? "1" : "0") + "," +
               (c.fit ? format_number(c.fit->log_likelihood) : std::string()) + "," + opt(c.aic) +
               "," + (rank_of[i] ? std::to_string(rank_of[i]) : std::string()) + "," + opt(c.rmse) +
               "," + (c.diagnostics ? format_number(c.diagnostics->ljung_box.p_value) : std::string()) +
               "," + (c.diagnostics ? format_number(c.diagnostics->shapiro_wilk.p_value) : std::string()) +
               "," + (i == report.chosen ? "1" : "0") + "," + csv_escape(c.error) + "\n";
    }

    Json evaluated = Json::array();
    for (std::size_t i : report.evaluated) {
        const Candidate& c = report.candidates[i];
        evaluated.push_back(Json{{"model", c.spec.label()}, {"aic", *c.aic}, {"rmse", *c.rmse}});
    }
    Json top = Json::array();
    for (std::size_t r = 0; r < std::min<std::size_t>(10, report.ranking.size()); ++r) {
        const Candidate& c = report.candidates[report.ranking[r]];
        top.push_back(Json{{"model", c.spec.label()}, {"aic", *c.aic}, {"converged", c.converged}});
    }
    const Candidate& chosen = report.chosen_candidate();
    StageResult out;
    out.report = Json{{"candidates", report.candidates.size()},
                      {"successful_fits", report.ranking.size()},
                      {"top_k", config.top_k},
                      {"aic_ranking", top},
                      {"evaluated", evaluated},
                      {"chosen", fit_to_json(*chosen.fit)},
                      {"d", ident.d},
                      {"transform", transform_to_json(data)}};
    out.files = ident.files;
    out.files["selection/candidates.csv"] = csv;
    out.files["selection/selection.json"] = out.report.dump(2) + "\n";
    return {std::move(out), *chosen.fit};
}

}  // namespace

StageResult run_select(const PreparedData& data, const RunConfig& config) {
    return select_stage(data, config).stage;
}

StageResult run_forecast(const PreparedData& data, const RunConfig& config) {
    const FitResult train_fit = fit(require_model(config), data.model_train);
    return forecast_stage(data, config, train_fit).stage;
}

StageResult run_earnings(const PreparedData& data, const RunConfig& config) {
    const FitResult train_fit = fit(require_model(config), data.model_train);
    ForecastStage fc = forecast_stage(data, config, train_fit);
    StageResult out = earnings_stage(fc.future, config);
    merge(out.files, fc.stage.files);
    return out;
}

StageResult run_pipeline(const IngestedDataset& dataset, const RunConfig& config) {
    const PreparedData data = prepare(dataset.series, config);
    SelectStage selected = select_stage(data, config);
    StageResult& selection = selected.stage;
    const FitResult& train_fit = selected.chosen;
    const SarimaSpec& spec = train_fit.spec;

    StageResult diag = diagnose_stage(train_fit, config);
    ForecastStage fc = forecast_stage(data, config, train_fit);
    StageResult earn = earnings_stage(fc.future, config);

    StageResult out;
    out.files = std::move(selection.files);
    merge(out.files, diag.files);
    merge(out.files, fc.stage.files);
    merge(out.files, earn.files);
    out.report = Json{{"source", dataset.source},
                      {"rows", dataset.rows()},
                      {"model", spec.label()},
                      {"aic", train_fit.aic},
                      {"holdout_rmse", fc.stage.report["holdout"]["rmse"]},
                      {"diagnostics", diag.report["verdict"]},
                      {"total_loss", earn.report["total_loss"]},
                      {"files", out.files.size()}};
    return out;
}

}  // namespace bj::cli
