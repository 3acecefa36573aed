#include "ltevid/video/transport.hpp"

#include <algorithm>
#include <string>

#include "ltevid/errors.hpp"
#include "ltevid/phy/crc.hpp"
#include "ltevid/phy/qpp.hpp"

namespace ltevid::video {

PayloadMap::Location PayloadMap::locate(std::size_t bit) const {
    if (bit >= payload_bits) throw ContractError("bit index outside the payload");
    return {bit / chunk_bits, bit % chunk_bits};
}

std::size_t PayloadMap::chunk_payload(std::size_t i) const noexcept {
    if (i >= chunk_count()) return 0;
    return std::min(chunk_bits, payload_bits - i * chunk_bits);
}

Segmentation segment(std::span<const std::uint8_t> bits, std::size_t block_size) {
    if (!phy::is_valid_block_size(block_size))
        throw UnsupportedSizeError("no QPP interleaver for K=" + std::to_string(block_size));
    Segmentation s;
    s.map.payload_bits = bits.size();
    s.map.chunk_bits = block_size - phy::kCrc24Length;
    s.payloads.reserve(s.map.chunk_count());
    for (std::size_t i = 0; i < s.map.chunk_count(); ++i) {
        phy::Bits p(s.map.chunk_bits, 0);
        const auto n = s.map.chunk_payload(i);
        std::copy_n(bits.begin() + static_cast<std::ptrdiff_t>(s.map.chunk_begin(i)), n, p.begin());
        s.payloads.push_back(std::move(p));
    }
    return s;
}

phy::Bits reassemble(const std::vector<phy::Bits>& payloads, const PayloadMap& map) {
    if (payloads.size() != map.chunk_count())
        throw FramingError("expected " + std::to_string(map.chunk_count()) + " payloads, got " +
                           std::to_string(payloads.size()));
    phy::Bits out;
    out.reserve(map.payload_bits);
    for (std::size_t i = 0; i < payloads.size(); ++i) {
        if (payloads[i].size() != map.chunk_bits)
            throw FramingError("payload " + std::to_string(i) + " has " + std::to_string(payloads[i].size()) +
                               " bits, expected " + std::to_string(map.chunk_bits));
        const auto n = map.chunk_payload(i);
        out.insert(out.end(), payloads[i].begin(), payloads[i].begin() + static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

}  // namespace ltevid::video
