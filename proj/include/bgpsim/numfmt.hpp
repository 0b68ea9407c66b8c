#pragma once

// Locale-independent numeric text. CSV values are written with the shortest
// representation that round-trips exactly, so equal doubles always produce
// equal bytes and re-parsing reproduces the bit pattern.

#include <charconv>
#include <string>
#include <string_view>

#include "bgpsim/errors.hpp"

namespace bgpsim {

inline std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

/// Strict full-token parse; throws ParseError on trailing garbage.
inline double parse_double(std::string_view text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("bad numeric field '" + std::string(text) + "'");
    return value;
}

} // namespace bgpsim
