#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace daekit {

enum class ErrorCode {
    InvalidInput,
    SingularShift,
    ShiftOutsideResolventSet,
    IrregularPencil,
    IllConditionedTransform,
    NoConvergence,
    DegeneratePairing,
    QuadratureNotConverged,
    InconsistentInitialState,
    OverflowRisk,
    SingularQ,
    NoSpectralGap,
    InvalidParams,
    PoleHit,
    LapackFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::ShiftOutsideResolventSet: return "ShiftOutsideResolventSet";
    case ErrorCode::IrregularPencil: return "IrregularPencil";
    case ErrorCode::IllConditionedTransform: return "IllConditionedTransform";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegeneratePairing: return "DegeneratePairing";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::InconsistentInitialState: return "InconsistentInitialState";
    case ErrorCode::OverflowRisk: return "OverflowRisk";
    case ErrorCode::SingularQ: return "SingularQ";
    case ErrorCode::NoSpectralGap: return "NoSpectralGap";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::LapackFailure: return "LapackFailure";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace daekit
