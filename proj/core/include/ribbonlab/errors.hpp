#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ribbonlab {

enum class ErrorKind {
    InvalidArgument,
    UnsupportedTexture,
    DegenerateActivation,
    Quadrature,
    InvalidConfiguration,
    InvalidFrame,
    DomainSingularity,
    AnsatzDegenerate,
    InternalConsistency,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:      return "invalid argument";
        case ErrorKind::UnsupportedTexture:   return "unsupported texture";
        case ErrorKind::DegenerateActivation: return "degenerate activation";
        case ErrorKind::Quadrature:           return "quadrature";
        case ErrorKind::InvalidConfiguration: return "invalid configuration";
        case ErrorKind::InvalidFrame:         return "invalid frame";
        case ErrorKind::DomainSingularity:    return "domain singularity";
        case ErrorKind::AnsatzDegenerate:     return "ansatz degenerate";
        case ErrorKind::InternalConsistency:  return "internal consistency";
        case ErrorKind::Config:               return "config";
        case ErrorKind::Io:                   return "io";
    }
    return "unknown";
}

} // namespace ribbonlab
