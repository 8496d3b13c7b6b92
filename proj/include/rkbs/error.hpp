#pragma once

#include <stdexcept>
#include <string>

namespace rkbs {

/// Classifies library failures so callers (and the CLI) can map them to exit codes.
enum class ErrorKind {
    Domain,
    UnsupportedKernel,
    DuplicatePoints,
    SingularGram,
    DegenerateSchur,
    FormulaUnavailable,
    KernelMismatch,
    DimensionMismatch,
    NegativeMu,
    SingularShifted,
    InvalidArgument,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::UnsupportedKernel: return "UnsupportedKernel";
        case ErrorKind::DuplicatePoints: return "DuplicatePoints";
        case ErrorKind::SingularGram: return "SingularGram";
        case ErrorKind::DegenerateSchur: return "DegenerateSchur";
        case ErrorKind::FormulaUnavailable: return "FormulaUnavailable";
        case ErrorKind::KernelMismatch: return "KernelMismatch";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NegativeMu: return "NegativeMu";
        case ErrorKind::SingularShifted: return "SingularShifted";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by floating-point conditioning rather than bad input.
    bool is_numerical() const noexcept {
        return kind_ == ErrorKind::SingularGram || kind_ == ErrorKind::DegenerateSchur ||
               kind_ == ErrorKind::SingularShifted;
    }

private:
    ErrorKind kind_;
};

}  // namespace rkbs
