#include "povliq/error.hpp"

namespace povliq {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::ZeroVolatility: return "ZeroVolatility";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::NonPositivePhi: return "NonPositivePhi";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::RequiresFlatCurve: return "RequiresFlatCurve";
        case ErrorCode::BracketTooNarrow: return "BracketTooNarrow";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::TooFewPaths: return "TooFewPaths";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownParameter: return "UnknownParameter";
        case ErrorCode::EmptyRange: return "EmptyRange";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& field, const std::string& message) {
    std::string out(to_string(code));
    if (!field.empty()) {
        out += " (" + field + ")";
    }
    if (!message.empty()) {
        out += ": " + message;
    }
    return out;
}

} // namespace

Error::Error(ErrorCode code, std::string field, const std::string& message)
    : std::runtime_error(compose(code, field, message)), code_(code), field_(std::move(field)) {}

} // namespace povliq
