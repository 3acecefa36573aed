#pragma once

#include <cstddef>
#include <span>

#include "ltevid/phy/bits.hpp"
#include "ltevid/video/yuv.hpp"

namespace ltevid::video {

/// Fixed-rate intra codec: every 8x8 block of every plane costs exactly
/// coeffs_kept * bits_per_coeff bits, so a bit error never leaves its block.
struct BlockCodecConfig {
    double quant_step = 8.0;
    int bits_per_coeff = 8;
    int coeffs_kept = 16;
    /// Send raw samples (8 bits each) instead of DCT codes.
    bool passthrough = false;

    /// Throws ContractError.
    void validate() const;
    bool operator==(const BlockCodecConfig&) const = default;
};

std::size_t frame_bit_count(const BlockCodecConfig& cfg, std::size_t width, std::size_t height);

phy::Bits encode_frame(const Frame& frame, const BlockCodecConfig& cfg);
/// Any bit pattern of the right length decodes. FramingError otherwise.
Frame decode_frame(std::span<const std::uint8_t> bits, const BlockCodecConfig& cfg, std::size_t width,
                   std::size_t height);

phy::Bits encode_sequence(const VideoSequence& seq, const BlockCodecConfig& cfg);
VideoSequence decode_sequence(std::span<const std::uint8_t> bits, const BlockCodecConfig& cfg, std::size_t width,
                              std::size_t height);

/// Where a bit of one encoded frame lands. For passthrough, block coordinates
/// are the sample coordinates.
struct BlockLocation {
    int plane = 0;
    std::size_t block_x = 0;
    std::size_t block_y = 0;
    bool operator==(const BlockLocation&) const = default;
};

BlockLocation locate_bit(const BlockCodecConfig& cfg, std::size_t width, std::size_t height, std::size_t bit);

/// First bit of a block inside its frame; the block spans
/// coeffs_kept * bits_per_coeff bits.
std::size_t block_bit_offset(const BlockCodecConfig& cfg, std::size_t width, std::size_t height,
                             const BlockLocation& where);

}  // namespace ltevid::video
