#pragma once

#include <cstdio>
#include <string>

namespace mparity::io {

/// Shortest decimal form that round-trips a double exactly (%.17g); used for
/// every floating-point value that leaves the process, so reruns compare
/// byte-for-byte.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_bool(bool v) { return v ? "true" : "false"; }

}  // namespace mparity::io
