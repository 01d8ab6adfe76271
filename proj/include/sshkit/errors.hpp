#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sshkit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when a domain value violates its invariant. `field()` names the
/// offending parameter so front ends can report it verbatim.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Simulation setup that cannot be honoured (e.g. a step too coarse for the LC ring).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_positive(double v, const char* field) {
    if (!(v > 0.0) || std::isnan(v))
        throw ValidationError(field, "must be > 0, got " + std::to_string(v));
}

inline void require_positive_finite(double v, const char* field) {
    require_positive(v, field);
    if (!std::isfinite(v))
        throw ValidationError(field, "must be finite");
}

inline void require_non_negative(double v, const char* field) {
    if (!(v >= 0.0))
        throw ValidationError(field, "must be >= 0, got " + std::to_string(v));
}

inline void require_non_negative_finite(double v, const char* field) {
    require_non_negative(v, field);
    if (!std::isfinite(v))
        throw ValidationError(field, "must be finite");
}

}  // namespace detail
}  // namespace sshkit
