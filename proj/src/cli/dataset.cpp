#include "bj/cli/dataset.hpp"

#include "bj/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace bj::cli {

std::string IngestedDataset::summary() const {
    return source + ": " + std::to_string(rows()) + " months, " +
           series.start().to_string() + " to " + series.end().to_string();
}

std::string format_number(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw DataError("cannot format number");
    return std::string(buf, end);
}

namespace {

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

DataError line_error(const std::string& source, std::size_t line, const std::string& what) {
    return DataError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

IngestedDataset parse_dataset(std::string_view text, std::string source) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
        lines.push_back(trim_cr(text.substr(pos, stop - pos)));
        pos = stop + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.empty()) throw line_error(source, 1, "empty file, expected header 'month,arrivals'");
    if (lines.front() != "month,arrivals") {
        throw line_error(source, 1, "expected header 'month,arrivals', got '" +
                                        std::string(lines.front()) + "'");
    }
    if (lines.size() == 1) throw line_error(source, 2, "no data rows");

    std::vector<double> values;
    YearMonth start{}, previous{};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = lines[i];
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw line_error(source, lineno, "expected two fields 'month,arrivals'");
        }
        YearMonth month;
        try {
            month = YearMonth::parse(line.substr(0, comma));
        } catch (const DataError& ex) {
            throw line_error(source, lineno, ex.what());
        }
        const std::string_view field = line.substr(comma + 1);
        long long count = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), count);
        if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() ||
            field.front() == '-' || field.front() == '+') {
            throw line_error(source, lineno, "arrivals '" + std::string(field) +
                                                 "' is not a non-negative integer (" +
                                                 month.to_string() + ")");
        }
        if (count <= 0) {
            throw line_error(source, lineno,
                             "non-positive arrivals for " + month.to_string() +
                                 " (Box-Cox transforms need positive counts)");
        }
        if (i == 1) {
            start = month;
        } else if (month == previous) {
            throw line_error(source, lineno, "duplicate month " + month.to_string());
        } else if (month < previous) {
            throw line_error(source, lineno, "month " + month.to_string() + " is out of order after " +
                                                 previous.to_string());
        } else if (month != previous.plus(1)) {
            throw line_error(source, lineno, "gap: expected " + previous.plus(1).to_string() +
                                                 ", got " + month.to_string());
        }
        previous = month;
        values.push_back(static_cast<double>(count));
    }
    return IngestedDataset{std::move(source), TimeSeries(start, std::move(values))};
}

IngestedDataset ingest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), path.string());
}

std::string format_dataset(const TimeSeries& series) {
    std::string out = "month,arrivals\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = series[i];
        if (v != std::floor(v) || v <= 0.0 || v > 9.0e15) {
            throw DataError("value " + format_number(v) + " at " + series.month_at(i).to_string() +
                            " is not a positive integer count");
        }
        out += series.month_at(i).to_string();
        out += ',';
        out += std::to_string(static_cast<long long>(v));
        out += '\n';
    }
    return out;
}

}  // namespace bj::cli
