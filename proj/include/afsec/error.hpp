#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace afsec {

enum class ErrorCode {
    InvalidInstance,
    NonInvertible,
    Unbounded,
    NoConvergence,
    InvalidBracket,
    BadSignPattern,
    Infeasible,
    InvalidEta,
    DegradednessViolated,
    InvalidAlpha,
    BudgetExceeded,
    MethodMismatch,
    ParseError,
    InvalidConstraints,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidBracket: return "InvalidBracket";
    case ErrorCode::BadSignPattern: return "BadSignPattern";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidEta: return "InvalidEta";
    case ErrorCode::DegradednessViolated: return "DegradednessViolated";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MethodMismatch: return "MethodMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConstraints: return "InvalidConstraints";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace afsec
