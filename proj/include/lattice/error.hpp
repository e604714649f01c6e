#pragma once

#include <stdexcept>
#include <string>

namespace lattice {

enum class ErrorKind {
    ParameterDomain,
    Geometry,
    EmptyPattern,
    Disconnected,
    Mechanism,
    Infeasible,
    Mismatch,
    Io,
    Config,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::EmptyPattern: return "empty-pattern";
    case ErrorKind::Disconnected: return "disconnected";
    case ErrorKind::Mechanism: return "mechanism";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Mismatch: return "mismatch";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

/// Single exception type for the library; `kind()` lets callers map
/// failures to exit codes without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace lattice
