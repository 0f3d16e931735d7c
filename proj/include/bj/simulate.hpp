#pragma once

#include "bj/sarima.hpp"
#include "bj/series.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace bj {

struct SimulationConfig {
    SarimaSpec spec;
    SarimaParams params;   // sigma2 may be 0 for a deterministic path
    std::size_t n = 100;
    std::optional<std::size_t> burn_in;  // default max(200, 13·s)
    std::uint64_t seed = 1;
    YearMonth start{2000, 1};

    [[nodiscard]] std::size_t effective_burn_in() const;
};

/// Standard normal draws from a 64-bit Mersenne Twister through the
/// Box-Muller transform; the sequence is fixed for a given seed on every
/// platform.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform();  // (0, 1]

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// Simulates the SARIMA process: Gaussian ARMA on the differenced scale,
/// integrated from zero starting values, with the burn-in discarded.
TimeSeries simulate(const SimulationConfig& config);

}  // namespace bj
