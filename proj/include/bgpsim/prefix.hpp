#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bgpsim {

/** IPv4 prefix in host byte order. Host bits below `length` are always zero;
 *  the factory functions enforce that so two equal prefixes compare equal
 *  bit-for-bit. */
struct Prefix {
    std::uint32_t addr = 0;
    std::uint8_t length = 0;

    /// Network mask for a given prefix length (len 0 covers everything).
    static constexpr std::uint32_t mask_for(std::uint8_t len) {
        return len == 0 ? 0u : ~std::uint32_t{0} << (32u - len);
    }

    /// Builds a prefix, masking any stray host bits.
    static constexpr Prefix make(std::uint32_t addr, std::uint8_t len) {
        return Prefix{addr & mask_for(len), len};
    }

    /// Parses dotted-quad "a.b.c.d/len". Throws ParseError, including when
    /// host bits are set (a deliberately strict reading: "1.2.3.4/16" is a
    /// typo, not a prefix).
    static Prefix parse(std::string_view text);

    std::string str() const;

    /// True when `other` lies inside this prefix (equal-or-longer length,
    /// matching network bits).
    constexpr bool covers(const Prefix& other) const {
        return length <= other.length && ((other.addr ^ addr) & mask_for(length)) == 0;
    }

    friend constexpr auto operator<=>(const Prefix&, const Prefix&) = default;
};

} // namespace bgpsim
