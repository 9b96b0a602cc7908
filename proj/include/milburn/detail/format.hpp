#pragma once

#include <cstdio>
#include <string>

namespace milburn::detail {

/// Shortest-ish human form for diagnostics.
inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Round-trippable form (17 significant digits).
inline std::string exact_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace milburn::detail
