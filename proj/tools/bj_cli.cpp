// Command-line front end: ingest, identify, fit, diagnose, select, forecast,
// earnings, simulate and the end-to-end pipeline.

#include "bj/cli/dataset.hpp"
#include "bj/cli/pipeline.hpp"
#include "bj/errors.hpp"
#include "bj/simulate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace bj;
using namespace bj::cli;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<int> parse_int_list(const std::string& text, std::size_t expected, const char* flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + text + "' is not a list of integers");
        }
    }
    if (expected && out.size() != expected) {
        throw UsageError(std::string(flag) + " expects " + std::to_string(expected) + " values");
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + text + "' is not a list of numbers");
        }
    }
    return out;
}

YearMonth parse_month(const std::string& text, const char* flag) {
    try {
        return YearMonth::parse(text);
    } catch (const DataError&) {
        throw UsageError(std::string(flag) + ": '" + text + "' is not a YYYY-MM month");
    }
}

struct Flags {
    std::string input;
    std::string output;
    std::string split;
    std::string lambda = "auto";
    std::string variant = "shifted";
    int period = 12;

    std::string order;
    std::string seasonal = "0,0,0";
    bool constant = false;

    int max_p = 2, max_q = 2, max_P = 2, max_Q = 2;
    int d = -1;
    std::string seasonal_diff = "0,1";
    std::size_t top_k = 2;
    unsigned threads = 1;

    int max_lag = 0;
    int lags = 20;
    int horizon = 12;
    double level = 0.95;
    bool bias_adjust = false;

    double ade = 8423.98;
    double alos = 7.11;
    bool no_round_alos = false;
    std::string loss_from, loss_to;
};

RunConfig to_config(const Flags& f) {
    RunConfig c;
    if (!f.split.empty()) c.split = parse_month(f.split, "--split");
    if (f.lambda == "auto") {
        c.boxcox_mode = BoxCoxMode::Auto;
    } else if (f.lambda == "none") {
        c.boxcox_mode = BoxCoxMode::None;
    } else {
        c.boxcox_mode = BoxCoxMode::Explicit;
        const auto v = parse_real_list(f.lambda, "--lambda");
        if (v.size() != 1 || !std::isfinite(v[0])) throw UsageError("--lambda: expected auto, none or a number");
        c.lambda = v[0];
    }
    if (f.variant == "shifted") {
        c.variant = BoxCoxVariant::Shifted;
    } else if (f.variant == "power") {
        c.variant = BoxCoxVariant::Power;
    } else {
        throw UsageError("--variant must be 'shifted' or 'power'");
    }
    c.period = f.period;
    if (!f.order.empty()) {
        const auto o = parse_int_list(f.order, 3, "--order");
        const auto so = parse_int_list(f.seasonal, 3, "--seasonal");
        c.model = SarimaSpec{o[0], o[1], o[2], so[0], so[1], so[2], f.period, f.constant};
    }
    if (f.d >= 0) c.d = f.d;
    c.grid.max_p = f.max_p;
    c.grid.max_q = f.max_q;
    c.grid.max_P = f.max_P;
    c.grid.max_Q = f.max_Q;
    c.grid.D_values = parse_int_list(f.seasonal_diff, 0, "--seasonal-diff");
    c.grid.s = f.period;
    c.top_k = f.top_k;
    c.threads = f.threads;
    if (f.max_lag > 0) c.max_lag = static_cast<std::size_t>(f.max_lag);
    c.diagnostic_lags = f.lags;
    c.horizon = f.horizon;
    c.level = f.level;
    c.bias_adjust = f.bias_adjust;
    c.earnings.ade = f.ade;
    c.earnings.alos = f.alos;
    c.earnings.round_alos = !f.no_round_alos;
    if (!f.loss_from.empty() || !f.loss_to.empty()) {
        if (f.loss_from.empty() || f.loss_to.empty()) {
            throw UsageError("--loss-from and --loss-to must be given together");
        }
        c.earnings.window_start = parse_month(f.loss_from, "--loss-from");
        c.earnings.window_end = parse_month(f.loss_to, "--loss-to");
        c.earnings_window_set = true;
    }
    return c;
}

void emit(const StageResult& result, const Flags& flags) {
    if (!flags.output.empty()) write_files(result.files, flags.output);
    std::cout << result.report.dump(2) << "\n";
}

void add_data_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--input", f.input, "CSV with columns month,arrivals")->required();
    cmd->add_option("--output", f.output, "Directory for reports and plot data");
    cmd->add_option("--split", f.split, "Last training month (YYYY-MM); default: 12 months before the end");
    cmd->add_option("--lambda", f.lambda, "Box-Cox parameter: auto, none, or a number");
    cmd->add_option("--variant", f.variant, "Box-Cox form: shifted or power");
    cmd->add_option("--period", f.period, "Season length in months");
}

void add_model_flags(CLI::App* cmd, Flags& f, bool required) {
    auto* o = cmd->add_option("--order", f.order, "Non-seasonal order p,d,q");
    if (required) o->required();
    cmd->add_option("--seasonal", f.seasonal, "Seasonal order P,D,Q");
    cmd->add_flag("--constant", f.constant, "Estimate a mean for the differenced series");
}

void add_forecast_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--horizon", f.horizon, "Months to forecast past the end of the data");
    cmd->add_option("--level", f.level, "Prediction interval level");
    cmd->add_flag("--bias-adjust", f.bias_adjust, "Mean instead of median back-transform");
}

void add_earnings_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--ade", f.ade, "Average daily expenditure per visitor");
    cmd->add_option("--alos", f.alos, "Average length of stay in nights");
    cmd->add_flag("--no-round-alos", f.no_round_alos, "Use the length of stay as given");
    cmd->add_option("--loss-from", f.loss_from, "First month of zero arrivals (YYYY-MM)");
    cmd->add_option("--loss-to", f.loss_to, "Last month of zero arrivals (YYYY-MM)");
}

void add_grid_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--max-p", f.max_p, "Largest AR order in the grid (0-3)");
    cmd->add_option("--max-q", f.max_q, "Largest MA order in the grid (0-3)");
    cmd->add_option("--max-P", f.max_P, "Largest seasonal AR order (0-3)");
    cmd->add_option("--max-Q", f.max_Q, "Largest seasonal MA order (0-3)");
    cmd->add_option("--d", f.d, "Regular differencing order (default: from ADF tests)");
    cmd->add_option("--seasonal-diff", f.seasonal_diff, "Seasonal differencing orders to search");
    cmd->add_option("--top-k", f.top_k, "Candidates by AIC scored on the holdout");
    cmd->add_option("--threads", f.threads, "Worker threads for candidate fits");
}

struct SimFlags {
    std::string order = "1,0,0";
    std::string seasonal = "0,0,0";
    int period = 12;
    std::string ar, ma, sar, sma;
    double constant = std::nan("");
    double sigma2 = 1.0;
    std::size_t n = 120;
    int burn_in = -1;
    std::uint64_t seed = 1;
    std::string start = "2000-01";
    double exp_level = std::nan("");
    std::string output;
};

int run_simulate(const SimFlags& f) {
    const auto o = parse_int_list(f.order, 3, "--order");
    const auto so = parse_int_list(f.seasonal, 3, "--seasonal");
    SimulationConfig config;
    config.spec = SarimaSpec{o[0], o[1], o[2], so[0], so[1], so[2], f.period, !std::isnan(f.constant)};
    config.params.ar = parse_real_list(f.ar, "--ar");
    config.params.ma = parse_real_list(f.ma, "--ma");
    config.params.sar = parse_real_list(f.sar, "--sar");
    config.params.sma = parse_real_list(f.sma, "--sma");
    if (!std::isnan(f.constant)) config.params.constant = f.constant;
    config.params.sigma2 = f.sigma2;
    config.n = f.n;
    if (f.burn_in >= 0) config.burn_in = static_cast<std::size_t>(f.burn_in);
    config.seed = f.seed;
    config.start = parse_month(f.start, "--start");
    const TimeSeries series = simulate(config);

    std::string body;
    if (!std::isnan(f.exp_level)) {
        std::vector<double> counts;
        for (double v : series.values()) counts.push_back(std::max(1.0, std::round(std::exp(f.exp_level + v))));
        body = format_dataset(TimeSeries(series.start(), std::move(counts)));
    } else {
        body = "month,value\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            body += series.month_at(i).to_string() + "," + format_number(series[i]) + "\n";
        }
    }
    if (f.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(f.output, std::ios::binary);
        out << body;
        out.close();
        if (!out) throw DataError("cannot write " + f.output);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seasonal ARIMA identification, estimation, diagnostics and forecasting"};
    app.require_subcommand(1);
    Flags flags;
    SimFlags sim;

    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a dataset and print its summary");
    ingest_cmd->add_option("--input", flags.input)->required();
    ingest_cmd->add_option("--output", flags.output, "Write the normalised CSV here");

    auto* identify_cmd = app.add_subcommand("identify", "Correlograms, ADF tests and Box-Cox selection");
    add_data_flags(identify_cmd, flags);
    identify_cmd->add_option("--max-lag", flags.max_lag, "Correlogram lags (default 10*log10(n))");
    identify_cmd->add_option("--d", flags.d, "Regular differencing order (default: from ADF tests)");

    auto* fit_cmd = app.add_subcommand("fit", "Estimate one model on the training period");
    add_data_flags(fit_cmd, flags);
    add_model_flags(fit_cmd, flags, true);

    auto* diagnose_cmd = app.add_subcommand("diagnose", "Residual checks for one model");
    add_data_flags(diagnose_cmd, flags);
    add_model_flags(diagnose_cmd, flags, true);
    diagnose_cmd->add_option("--lags", flags.lags, "Ljung-Box and residual correlogram lags");

    auto* select_cmd = app.add_subcommand("select", "Grid search ranked by AIC, decided by holdout RMSE");
    add_data_flags(select_cmd, flags);
    add_grid_flags(select_cmd, flags);
    select_cmd->add_option("--lags", flags.lags, "Ljung-Box lags for candidate diagnostics");

    auto* forecast_cmd = app.add_subcommand("forecast", "Holdout accuracy and forecasts for one model");
    add_data_flags(forecast_cmd, flags);
    add_model_flags(forecast_cmd, flags, true);
    add_forecast_flags(forecast_cmd, flags);

    auto* earnings_cmd = app.add_subcommand("earnings", "Tourism earnings loss from forecast arrivals");
    add_data_flags(earnings_cmd, flags);
    add_model_flags(earnings_cmd, flags, true);
    add_forecast_flags(earnings_cmd, flags);
    add_earnings_flags(earnings_cmd, flags);

    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a SARIMA series as CSV");
    simulate_cmd->add_option("--order", sim.order, "p,d,q");
    simulate_cmd->add_option("--seasonal", sim.seasonal, "P,D,Q");
    simulate_cmd->add_option("--period", sim.period);
    simulate_cmd->add_option("--ar", sim.ar, "Comma-separated AR coefficients");
    simulate_cmd->add_option("--ma", sim.ma, "Comma-separated MA coefficients");
    simulate_cmd->add_option("--sar", sim.sar, "Comma-separated seasonal AR coefficients");
    simulate_cmd->add_option("--sma", sim.sma, "Comma-separated seasonal MA coefficients");
    simulate_cmd->add_option("--constant", sim.constant, "Mean of the differenced series");
    simulate_cmd->add_option("--sigma2", sim.sigma2, "Innovation variance");
    simulate_cmd->add_option("--n", sim.n, "Number of months");
    simulate_cmd->add_option("--burn-in", sim.burn_in, "Discarded initial steps");
    simulate_cmd->add_option("--seed", sim.seed);
    simulate_cmd->add_option("--start", sim.start, "First month (YYYY-MM)");
    simulate_cmd->add_option("--exp-level", sim.exp_level,
                             "Emit month,arrivals with arrivals = round(exp(level + x))");
    simulate_cmd->add_option("--output", sim.output, "Output file (default stdout)");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write all reports");
    add_data_flags(pipeline_cmd, flags);
    add_grid_flags(pipeline_cmd, flags);
    add_forecast_flags(pipeline_cmd, flags);
    add_earnings_flags(pipeline_cmd, flags);
    pipeline_cmd->add_option("--max-lag", flags.max_lag, "Correlogram lags (default 10*log10(n))");
    pipeline_cmd->add_option("--lags", flags.lags, "Ljung-Box and residual correlogram lags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate_cmd) return run_simulate(sim);

        const IngestedDataset dataset = ingest(flags.input);
        if (*ingest_cmd) {
            if (!flags.output.empty()) {
                std::ofstream out(flags.output, std::ios::binary);
                out << format_dataset(dataset.series);
                out.close();
                if (!out) throw DataError("cannot write " + flags.output);
            }
            std::cout << dataset.summary() << "\n";
            return kOk;
        }

        const RunConfig config = to_config(flags);
        if (*pipeline_cmd) {
            const StageResult result = run_pipeline(dataset, config);
            emit(result, flags);
            return kOk;
        }
        const PreparedData data = prepare(dataset.series, config);
        if (*identify_cmd) {
            const IdentifyOutput out = identify(data, config);
            emit(StageResult{out.report, out.files}, flags);
        } else if (*fit_cmd) {
            emit(run_fit(data, config), flags);
        } else if (*diagnose_cmd) {
            emit(run_diagnose(data, config), flags);
        } else if (*select_cmd) {
            emit(run_select(data, config), flags);
        } else if (*forecast_cmd) {
            emit(run_forecast(data, config), flags);
        } else if (*earnings_cmd) {
            emit(run_earnings(data, config), flags);
        }
        return kOk;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
}
