#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ltevid/phy/bits.hpp"

namespace ltevid::video {

/// How a payload bitstream is cut into transport-block payloads. Chunk i
/// carries payload bits [i*chunk_bits, (i+1)*chunk_bits); the last chunk is
/// zero-filled past payload_bits.
struct PayloadMap {
    std::size_t payload_bits = 0;
    std::size_t chunk_bits = 0;

    std::size_t chunk_count() const noexcept {
        return chunk_bits ? (payload_bits + chunk_bits - 1) / chunk_bits : 0;
    }
    std::size_t filler_bits() const noexcept { return chunk_count() * chunk_bits - payload_bits; }

    struct Location {
        std::size_t chunk;
        std::size_t offset;
    };
    /// Chunk and offset that carry payload bit `bit`.
    Location locate(std::size_t bit) const;
    /// First payload bit and bit count carried by chunk i (filler excluded).
    std::size_t chunk_begin(std::size_t i) const noexcept { return i * chunk_bits; }
    std::size_t chunk_payload(std::size_t i) const noexcept;

    bool operator==(const PayloadMap&) const = default;
};

struct Segmentation {
    std::vector<phy::Bits> payloads;
    PayloadMap map;
};

/// Splits bits into payloads for turbo block size k, i.e. k - 24 bits each to
/// leave room for the CRC. UnsupportedSizeError when k is not a QPP size.
Segmentation segment(std::span<const std::uint8_t> bits, std::size_t block_size);

/// Inverse of segment. Payloads are taken as delivered, errors included.
/// FramingError on a count or size mismatch.
phy::Bits reassemble(const std::vector<phy::Bits>& payloads, const PayloadMap& map);

}  // namespace ltevid::video
