#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ltevid::phy {

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Log-likelihood ratios; positive means bit 0 is more likely.
using Llrs = std::vector<float>;

/// MSB-first expansion of a byte string.
inline Bits bytes_to_bits(std::string_view bytes) {
    Bits out;
    out.reserve(bytes.size() * 8);
    for (unsigned char c : bytes)
        for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((c >> b) & 1u));
    return out;
}

inline std::size_t count_bit_errors(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t n = 0;
    const std::size_t len = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < len; ++i) n += (a[i] != b[i]);
    return n + (a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
}

}  // namespace ltevid::phy
