#pragma once

#include <cstdint>
#include <span>

#include "ltevid/phy/bits.hpp"

namespace ltevid::phy {

/// gCRC24A generator, implicit x^24 term: x^24+x^23+x^18+x^17+x^14+x^11+x^10+x^7+x^6+x^5+x^4+x^3+x+1.
inline constexpr std::uint32_t kCrc24aPoly = 0x864CFB;
inline constexpr std::size_t kCrc24Length = 24;

/// Remainder of payload(x)·x^24 modulo gCRC24A (bits MSB first).
std::uint32_t crc24a(std::span<const std::uint8_t> bits);

/// Appends the 24 parity bits, MSB first.
Bits crc24a_attach(std::span<const std::uint8_t> payload);

/// True when the whole frame (payload followed by parity) divides the generator.
/// Throws ContractError for frames of 24 bits or fewer.
bool crc24a_check(std::span<const std::uint8_t> frame);

}  // namespace ltevid::phy
