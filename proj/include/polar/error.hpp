#pragma once

#include <stdexcept>
#include <string>

namespace polar {

enum class ErrorCode {
    EmptyMask,
    NegativeTime,
    GridMismatch,
    InvalidArgument,
    BadContainment,
    NotNondegenerate,
    SequenceExhausted,
    PostconditionFailed,
    NegativityBreach,
    UnknownScenario,
    WrongRegime,
    ConfigError,
    IoError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyMask: return "EmptyMask";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::BadContainment: return "BadContainment";
        case ErrorCode::NotNondegenerate: return "NotNondegenerate";
        case ErrorCode::SequenceExhausted: return "SequenceExhausted";
        case ErrorCode::PostconditionFailed: return "PostconditionFailed";
        case ErrorCode::NegativityBreach: return "NegativityBreach";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::WrongRegime: return "WrongRegime";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polar
