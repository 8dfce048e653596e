#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace rcon {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Error taxonomy; the CLI maps param/config errors to exit 1 and
// numeric/precondition errors to exit 2.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct param_error : error {
    using error::error;
};
struct numeric_error : error {
    using error::error;
};
// Operation not supported for this kind (e.g. no closed-form density);
// callers fall back to Monte Carlo.
struct capability_error : error {
    using error::error;
};
struct precondition_error : error {
    using error::error;
};
struct generation_error : error {
    using error::error;
};

// Shortest-exact decimal formatting; used everywhere CSV/JSON output must be
// byte-stable across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace rcon
