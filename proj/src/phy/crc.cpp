#include "ltevid/phy/crc.hpp"

#include "ltevid/errors.hpp"

namespace ltevid::phy {

std::uint32_t crc24a(std::span<const std::uint8_t> bits) {
    std::uint32_t reg = 0;
    for (std::uint8_t b : bits) {
        const std::uint32_t top = ((reg >> 23) & 1u) ^ (b & 1u);
        reg = (reg << 1) & 0xFFFFFFu;
        if (top) reg ^= kCrc24aPoly;
    }
    return reg;
}

Bits crc24a_attach(std::span<const std::uint8_t> payload) {
    if (payload.empty()) throw ContractError("crc24a_attach: empty payload");
    Bits out(payload.begin(), payload.end());
    const std::uint32_t crc = crc24a(payload);
    for (int i = 23; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((crc >> i) & 1u));
    return out;
}

bool crc24a_check(std::span<const std::uint8_t> frame) {
    if (frame.size() <= kCrc24Length)
        throw ContractError("crc24a_check: frame must be longer than 24 bits");
    return crc24a(frame) == 0;
}

}  // namespace ltevid::phy
