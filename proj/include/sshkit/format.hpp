#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace sshkit {

/// Printed form of a double with `digits` significant digits; non-finite
/// values print as inf, -inf, nan.
inline std::string format_double(double v, int digits = 9) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}


}  // namespace sshkit
