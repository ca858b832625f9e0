#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wes {

enum class ErrorCode {
    ShapeMismatch,
    InvalidGroup,
    NotWellDefined,
    UnsupportedRank,
    BudgetExceeded,
    NotAutomorphism,
    NotInducible,
    HypothesisViolation,
    NotAComplex,
    ParseError,
};

constexpr std::string_view error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::InvalidGroup: return "INVALID_GROUP";
    case ErrorCode::NotWellDefined: return "NOT_WELL_DEFINED";
    case ErrorCode::UnsupportedRank: return "UNSUPPORTED_RANK";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::NotAutomorphism: return "NOT_AUTOMORPHISM";
    case ErrorCode::NotInducible: return "NOT_INDUCIBLE";
    case ErrorCode::HypothesisViolation: return "HYPOTHESIS_VIOLATION";
    case ErrorCode::NotAComplex: return "NOT_A_COMPLEX";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), message_(message)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace wes
