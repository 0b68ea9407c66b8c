#include "bgpsim/prefix.hpp"

#include <charconv>

#include "bgpsim/errors.hpp"

namespace bgpsim {

namespace {

// Parses an integer in [0, max] from [p, end), advancing p. Returns false on
// no digits or out-of-range.
bool parse_int(const char*& p, const char* end, unsigned max, unsigned& out) {
    auto [next, ec] = std::from_chars(p, end, out);
    if (ec != std::errc{} || next == p || out > max) return false;
    p = next;
    return true;
}

} // namespace

Prefix Prefix::parse(std::string_view text) {
    const char* p = text.data();
    const char* end = p + text.size();
    std::uint32_t addr = 0;
    for (int octet = 0; octet < 4; ++octet) {
        unsigned v = 0;
        if (!parse_int(p, end, 255, v)) throw ParseError("bad prefix '" + std::string(text) + "'");
        addr = addr << 8 | v;
        if (octet < 3) {
            if (p == end || *p != '.') throw ParseError("bad prefix '" + std::string(text) + "'");
            ++p;
        }
    }
    if (p == end || *p != '/') throw ParseError("bad prefix '" + std::string(text) + "': missing /len");
    ++p;
    unsigned len = 0;
    if (!parse_int(p, end, 32, len) || p != end)
        throw ParseError("bad prefix '" + std::string(text) + "': bad length");
    if ((addr & ~mask_for(static_cast<std::uint8_t>(len))) != 0)
        throw ParseError("bad prefix '" + std::string(text) + "': host bits set");
    return Prefix{addr, static_cast<std::uint8_t>(len)};
}

std::string Prefix::str() const {
    std::string out;
    out.reserve(18);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string(addr >> shift & 0xff);
        if (shift > 0) out += '.';
    }
    out += '/';
    out += std::to_string(length);
    return out;
}

} // namespace bgpsim
