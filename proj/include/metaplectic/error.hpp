#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metaplectic {

enum class ErrorCode {
    ShapeMismatch,
    NotSymplectic,
    SingularB,
    DegenerateCase,
    BadParams,
    Fault,
    BadGrid,
    OffGrid,
    GridMismatch,
    DimMismatch,
    BadBounds,
    ZeroReference,
    ConstructionFailed,
    Io,
    Format,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotSymplectic: return "NotSymplectic";
        case ErrorCode::SingularB: return "SingularB";
        case ErrorCode::DegenerateCase: return "DegenerateCase";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::Fault: return "Fault";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::OffGrid: return "OffGrid";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::BadBounds: return "BadBounds";
        case ErrorCode::ZeroReference: return "ZeroReference";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Format: return "Format";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

}  // namespace metaplectic
