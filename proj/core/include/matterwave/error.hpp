#pragma once

#include <stdexcept>
#include <string>

namespace matterwave {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration. `key()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Integration failure (step-size underflow or non-finite state).
class SolverError : public Error {
public:
    SolverError(const std::string& message, double t, double norm)
        : Error(message + " (t=" + std::to_string(t) + ", norm=" + std::to_string(norm) + ")"),
          reason_(message), t_(t), norm_(norm) {}

    /// Message without the time and norm suffix.
    const std::string& reason() const noexcept { return reason_; }
    double time() const noexcept { return t_; }
    double norm() const noexcept { return norm_; }

private:
    std::string reason_;
    double t_;
    double norm_;
};

/// Truncation order did not converge before the hard limit.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double last_difference, int last_order)
        : Error(message), last_difference_(last_difference), last_order_(last_order) {}

    double last_difference() const noexcept { return last_difference_; }
    int last_order() const noexcept { return last_order_; }

private:
    double last_difference_;
    int last_order_;
};

/// Wave packet and transition function live on incompatible momentum grids.
class GridError : public Error {
public:
    using Error::Error;
};

/// Malformed or corrupt transition-function cache file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Analysis precondition failed (no resonance, flat objective, degenerate signal).
class AnalysisError : public Error {
public:
    using Error::Error;
};

}  // namespace matterwave
