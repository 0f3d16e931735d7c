#include "bj/selection.hpp"

#include "bj/errors.hpp"
#include "bj/forecasting.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace bj {

std::vector<SarimaSpec> enumerate_grid(const GridBounds& bounds) {
    for (int v : {bounds.max_p, bounds.max_q, bounds.max_P, bounds.max_Q}) {
        if (v < 0 || v > 3) throw DataError("grid bounds must lie in 0..3");
    }
    std::vector<SarimaSpec> specs;
    for (int p = 0; p <= bounds.max_p; ++p)
        for (int d : bounds.d_values)
            for (int q = 0; q <= bounds.max_q; ++q)
                for (int P = 0; P <= bounds.max_P; ++P)
                    for (int D : bounds.D_values)
                        for (int Q = 0; Q <= bounds.max_Q; ++Q) {
                            SarimaSpec spec{p, d, q, P, D, Q, bounds.s, d + D == 0};
                            if (p + q + P + Q == 0 && !spec.include_constant) continue;
                            specs.push_back(spec);
                        }
    std::sort(specs.begin(), specs.end());
    specs.erase(std::unique(specs.begin(), specs.end()), specs.end());
    return specs;
}

namespace {

std::size_t differencing_span(const SarimaSpec& spec) {
    return static_cast<std::size_t>(spec.d + spec.D * (spec.D > 0 ? spec.s : 0));
}

}  // namespace

SelectionReport select_model(const TimeSeries& train, const TimeSeries& test,
                             const std::vector<SarimaSpec>& specs,
                             const SelectionOptions& options) {
    if (specs.empty()) throw DataError("model grid is empty");
    if (train.end().plus(1) != test.start()) {
        throw DataError("test series must start the month after the training series ends");
    }
    if (options.top_k == 0) throw DataError("top_k must be at least 1");

    std::size_t origin = 0;
    for (const auto& spec : specs) {
        origin = std::max(origin, spec.ar_span() + differencing_span(spec));
    }
    if (options.residual_origin) origin = std::max(origin, *options.residual_origin);

    SelectionReport report;
    report.candidates.resize(specs.size());
    const int horizon = static_cast<int>(test.size());

    auto work = [&](std::size_t i) {
        Candidate& c = report.candidates[i];
        c.spec = specs[i];
        try {
            FitOptions fit_options = options.fit;
            fit_options.min_conditioning = origin - differencing_span(c.spec);
            c.fit = fit(c.spec, train, fit_options);
            c.aic = c.fit->aic;
            c.converged = c.fit->converged;
            try {
                c.diagnostics = diagnose(*c.fit, options.diagnostic_lags);
            } catch (const std::exception&) {
                // Too few residuals for the requested lags; reported as absent.
            }
        } catch (const std::exception& ex) {
            c.fit.reset();
            c.error = ex.what();
        }
    };

    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(specs.size()));
    if (threads == 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < specs.size(); i = next++) work(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < report.candidates.size(); ++i) {
        if (report.candidates[i].aic) report.ranking.push_back(i);
    }
    if (report.ranking.empty()) throw NumericalError("every candidate fit failed");
    std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
        return *report.candidates[a].aic < *report.candidates[b].aic;
    });

    for (std::size_t i : report.ranking) {
        if (report.evaluated.size() == options.top_k) break;
        Candidate& c = report.candidates[i];
        if (!c.converged) continue;
        try {
            const ForecastResult fc = forecast(*c.fit, horizon);
            c.rmse = rmse(fc.point, test.values()).rmse;
            report.evaluated.push_back(i);
        } catch (const std::exception& ex) {
            c.error = std::string("holdout forecast failed: ") + ex.what();
        }
    }
    if (report.evaluated.empty()) throw NumericalError("no converged candidate could be evaluated");

    report.chosen = *std::min_element(
        report.evaluated.begin(), report.evaluated.end(), [&](std::size_t a, std::size_t b) {
            const Candidate& ca = report.candidates[a];
            const Candidate& cb = report.candidates[b];
            if (*ca.rmse != *cb.rmse) return *ca.rmse < *cb.rmse;
            if (ca.spec.n_coefficients() != cb.spec.n_coefficients()) {
                return ca.spec.n_coefficients() < cb.spec.n_coefficients();
            }
            return ca.spec < cb.spec;
        });
    return report;
}

SelectionReport grid_search(const TimeSeries& train, const TimeSeries& test,
                            const GridBounds& bounds, const SelectionOptions& options) {
    return select_model(train, test, enumerate_grid(bounds), options);
}

}  // namespace bj
