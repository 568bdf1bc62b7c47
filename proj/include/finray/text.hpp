#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "finray/errors.hpp"

namespace finray {

// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Strict full-token parse; `what` names the value in error messages.
inline double parse_double(std::string_view token, const std::string& what) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ValidationError("non-numeric value for " + what + ": '" + std::string(token) + "'");
    return v;
}

} // namespace finray
