#pragma once

#include "bj/series.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace bj::cli {

/// A validated monthly arrivals file.
struct IngestedDataset {
    std::string source;
    TimeSeries series;

    [[nodiscard]] std::size_t rows() const noexcept { return series.size(); }
    [[nodiscard]] std::string summary() const;
};

/// Parses a headered `month,arrivals` CSV (UTF-8, LF or CRLF). Months must be
/// consecutive YYYY-MM values; arrivals positive integers. Errors name the
/// offending line and month.
IngestedDataset parse_dataset(std::string_view text, std::string source = "<memory>");
IngestedDataset ingest(const std::filesystem::path& path);

/// Inverse of parse_dataset for integer-valued series.
std::string format_dataset(const TimeSeries& series);

/// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_number(double value);

}  // namespace bj::cli
