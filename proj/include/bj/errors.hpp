#pragma once

#include <stdexcept>
#include <string>

namespace bj {

/// Input data violates a precondition (length, positivity, date range, format).
class DataError : public std::invalid_argument {
public:
    explicit DataError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation could not be completed (singular system, non-invertible
/// polynomial, optimizer failure).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bj
