#pragma once

#include <stdexcept>
#include <string>

namespace smag {

// Three error families, matching the CLI exit-code taxonomy:
// ConfigError -> 1, NumericError -> 2, IoError -> 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : ConfigError {
    explicit DimensionMismatch(const std::string& msg) : ConfigError(msg) {}
};

struct GridMismatch : ConfigError {
    explicit GridMismatch(const std::string& msg) : ConfigError(msg) {}
};

struct InvalidExponent : ConfigError {
    explicit InvalidExponent(const std::string& msg) : ConfigError(msg) {}
};

struct ExponentTooSmall : ConfigError {
    explicit ExponentTooSmall(const std::string& msg) : ConfigError(msg) {}
};

struct ExponentOrder : ConfigError {
    explicit ExponentOrder(const std::string& msg) : ConfigError(msg) {}
};

struct NegativeTime : ConfigError {
    explicit NegativeTime(const std::string& msg) : ConfigError(msg) {}
};

struct EmptyTrajectory : ConfigError {
    explicit EmptyTrajectory(const std::string& msg) : ConfigError(msg) {}
};

struct InsufficientSamples : ConfigError {
    explicit InsufficientSamples(const std::string& msg) : ConfigError(msg) {}
};

struct WrongDimension : ConfigError {
    explicit WrongDimension(const std::string& msg) : ConfigError(msg) {}
};

struct NegativeOrderOnNonzeroMean : NumericError {
    explicit NegativeOrderOnNonzeroMean(const std::string& msg) : NumericError(msg) {}
};

struct NonzeroMean : NumericError {
    explicit NonzeroMean(const std::string& msg) : NumericError(msg) {}
};

struct NonDivergenceFreeInput : NumericError {
    explicit NonDivergenceFreeInput(const std::string& msg) : NumericError(msg) {}
};

struct NonFiniteField : NumericError {
    explicit NonFiniteField(const std::string& msg) : NumericError(msg) {}
};

struct NonContractive : NumericError {
    explicit NonContractive(const std::string& msg) : NumericError(msg) {}
};

}  // namespace smag
