#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace povliq {

enum class ErrorCode {
    NonPositiveInput,
    ZeroVolatility,
    NegativeTime,
    NonPositiveRate,
    NonPositivePhi,
    InvalidProfile,
    RequiresFlatCurve,
    BracketTooNarrow,
    InvalidArgument,
    InvalidConfig,
    TooFewPaths,
    ParseError,
    UnknownParameter,
    EmptyRange,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as an Error carrying a machine-readable
// code and, where one exists, the offending field name (e.g. "impact.eta").
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string field, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

} // namespace povliq
