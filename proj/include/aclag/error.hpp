#pragma once

#include <stdexcept>
#include <string>

namespace aclag {

enum class ErrorKind {
    // usage
    InvalidArgument,
    UnknownSchedule,
    // data
    TooShort,
    ParseError,
    InsufficientData,
    NonMonotoneTimestamps,
    EmptyOverlap,
    // numerical
    ZeroVariance,
    ZeroNorm,
    DegenerateRegressor,
    NumericalUnderflow,
};

/// Process exit status for an error kind: 1 usage, 2 data, 3 numerical.
constexpr int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownSchedule:
        return 1;
    case ErrorKind::TooShort:
    case ErrorKind::ParseError:
    case ErrorKind::InsufficientData:
    case ErrorKind::NonMonotoneTimestamps:
    case ErrorKind::EmptyOverlap:
        return 2;
    case ErrorKind::ZeroVariance:
    case ErrorKind::ZeroNorm:
    case ErrorKind::DegenerateRegressor:
    case ErrorKind::NumericalUnderflow:
        return 3;
    }
    return 3;
}

constexpr const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownSchedule: return "UnknownSchedule";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorKind::EmptyOverlap: return "EmptyOverlap";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::DegenerateRegressor: return "DegenerateRegressor";
    case ErrorKind::NumericalUnderflow: return "NumericalUnderflow";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace aclag
