#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

// Exit-code classes: config/regime problems map to 1, numerical failures to 2.
enum class ErrorKind { Config, Regime, UnsupportedDimension, Numerical, Io, Argument };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct RegimeError : Error {
    explicit RegimeError(const std::string& w) : Error(ErrorKind::Regime, w) {}
};
struct UnsupportedDimension : Error {
    explicit UnsupportedDimension(int d)
        : Error(ErrorKind::UnsupportedDimension,
                "d=" + std::to_string(d) + " (supported: 3..6)") {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Numerical: return 2;
    default: return 1;
    }
}

} // namespace nlslab
