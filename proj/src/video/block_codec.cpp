#include "ltevid/video/block_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltevid/video/dct.hpp"

namespace ltevid::video {
namespace {

std::size_t blocks_across(std::size_t n) { return (n + 7) / 8; }

struct PlaneGeometry {
    std::size_t w, h, bw, bh;
};

PlaneGeometry geometry(std::size_t width, std::size_t height, int plane) {
    const std::size_t w = plane ? width / 2 : width;
    const std::size_t h = plane ? height / 2 : height;
    return {w, h, blocks_across(w), blocks_across(h)};
}

std::size_t block_bits(const BlockCodecConfig& cfg) {
    return static_cast<std::size_t>(cfg.coeffs_kept) * static_cast<std::size_t>(cfg.bits_per_coeff);
}

void check_dims(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0 || width % 2 || height % 2)
        throw ContractError("frame dimensions must be even and non-zero");
}

void put_code(phy::Bits& out, long value, int nbits) {
    const auto u = static_cast<unsigned long>(value);
    for (int i = nbits - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((u >> i) & 1u));
}

long get_code(const std::uint8_t* p, int nbits) {
    unsigned long u = 0;
    for (int i = 0; i < nbits; ++i) u = (u << 1) | (p[i] & 1u);
    if (u >> (nbits - 1)) return static_cast<long>(u) - (1L << nbits);
    return static_cast<long>(u);
}

void encode_plane(const Plane& p, const BlockCodecConfig& cfg, phy::Bits& out) {
    const auto& zz = zigzag_order();
    const long lo = -(1L << (cfg.bits_per_coeff - 1));
    const long hi = (1L << (cfg.bits_per_coeff - 1)) - 1;
    Block8 blk;
    for (std::size_t by = 0; by < blocks_across(p.height); ++by)
        for (std::size_t bx = 0; bx < blocks_across(p.width); ++bx) {
            for (std::size_t y = 0; y < 8; ++y)
                for (std::size_t x = 0; x < 8; ++x) {
                    // Edge replication for planes that are not a multiple of 8.
                    const std::size_t sx = std::min(bx * 8 + x, p.width - 1);
                    const std::size_t sy = std::min(by * 8 + y, p.height - 1);
                    blk[y * 8 + x] = static_cast<double>(p.at(sx, sy)) - 128.0;
                }
            const Block8 c = dct8x8(blk);
            for (int i = 0; i < cfg.coeffs_kept; ++i) {
                const long q = std::clamp(std::lround(c[zz[i]] / cfg.quant_step), lo, hi);
                put_code(out, q, cfg.bits_per_coeff);
            }
        }
}

const std::uint8_t* decode_plane(const std::uint8_t* p, const BlockCodecConfig& cfg, Plane& out) {
    const auto& zz = zigzag_order();
    for (std::size_t by = 0; by < blocks_across(out.height); ++by)
        for (std::size_t bx = 0; bx < blocks_across(out.width); ++bx) {
            Block8 c{};
            for (int i = 0; i < cfg.coeffs_kept; ++i, p += cfg.bits_per_coeff)
                c[zz[i]] = static_cast<double>(get_code(p, cfg.bits_per_coeff)) * cfg.quant_step;
            const Block8 s = idct8x8(c);
            for (std::size_t y = 0; y < 8 && by * 8 + y < out.height; ++y)
                for (std::size_t x = 0; x < 8 && bx * 8 + x < out.width; ++x)
                    out.at(bx * 8 + x, by * 8 + y) =
                        static_cast<std::uint8_t>(std::clamp(std::lround(s[y * 8 + x] + 128.0), 0L, 255L));
        }
    return p;
}

}  // namespace

void BlockCodecConfig::validate() const {
    if (passthrough) return;
    if (!(quant_step > 0) || !std::isfinite(quant_step)) throw ContractError("quant_step must be positive");
    if (bits_per_coeff < 2 || bits_per_coeff > 16) throw ContractError("bits_per_coeff must be in [2,16]");
    if (coeffs_kept < 1 || coeffs_kept > 64) throw ContractError("coeffs_kept must be in [1,64]");
}

std::size_t frame_bit_count(const BlockCodecConfig& cfg, std::size_t width, std::size_t height) {
    check_dims(width, height);
    if (cfg.passthrough) return Frame::byte_size(width, height) * 8;
    std::size_t blocks = 0;
    for (int pl = 0; pl < 3; ++pl) {
        const auto g = geometry(width, height, pl);
        blocks += g.bw * g.bh;
    }
    return blocks * block_bits(cfg);
}

phy::Bits encode_frame(const Frame& frame, const BlockCodecConfig& cfg) {
    cfg.validate();
    phy::Bits out;
    out.reserve(frame_bit_count(cfg, frame.width(), frame.height()));
    for (int pl = 0; pl < 3; ++pl) {
        const Plane& p = frame.plane(pl);
        if (cfg.passthrough)
            for (auto s : p.samples) put_code(out, s, 8);
        else
            encode_plane(p, cfg, out);
    }
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bits, const BlockCodecConfig& cfg, std::size_t width,
                   std::size_t height) {
    cfg.validate();
    const std::size_t expected = frame_bit_count(cfg, width, height);
    if (bits.size() != expected)
        throw FramingError("frame needs " + std::to_string(expected) + " bits, got " + std::to_string(bits.size()));
    Frame f(width, height);
    const std::uint8_t* p = bits.data();
    for (int pl = 0; pl < 3; ++pl) {
        Plane& out = f.plane(pl);
        if (cfg.passthrough) {
            for (auto& s : out.samples) {
                s = static_cast<std::uint8_t>(get_code(p, 8) & 0xFF);
                p += 8;
            }
        } else {
            p = decode_plane(p, cfg, out);
        }
    }
    return f;
}

phy::Bits encode_sequence(const VideoSequence& seq, const BlockCodecConfig& cfg) {
    phy::Bits out;
    out.reserve(seq.size() * frame_bit_count(cfg, seq.width, seq.height));
    for (const auto& f : seq.frames) {
        const auto b = encode_frame(f, cfg);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

VideoSequence decode_sequence(std::span<const std::uint8_t> bits, const BlockCodecConfig& cfg, std::size_t width,
                              std::size_t height) {
    const std::size_t per = frame_bit_count(cfg, width, height);
    if (bits.size() % per)
        throw FramingError(std::to_string(bits.size()) + " bits is not a whole number of " + std::to_string(per) +
                           "-bit frames");
    VideoSequence seq;
    seq.width = width;
    seq.height = height;
    for (std::size_t off = 0; off < bits.size(); off += per)
        seq.frames.push_back(decode_frame(bits.subspan(off, per), cfg, width, height));
    return seq;
}

BlockLocation locate_bit(const BlockCodecConfig& cfg, std::size_t width, std::size_t height, std::size_t bit) {
    if (bit >= frame_bit_count(cfg, width, height)) throw ContractError("bit index outside the frame");
    if (cfg.passthrough) {
        std::size_t sample = bit / 8;
        for (int pl = 0; pl < 3; ++pl) {
            const auto g = geometry(width, height, pl);
            if (sample < g.w * g.h) return {pl, sample % g.w, sample / g.w};
            sample -= g.w * g.h;
        }
    }
    std::size_t block = bit / block_bits(cfg);
    for (int pl = 0; pl < 3; ++pl) {
        const auto g = geometry(width, height, pl);
        if (block < g.bw * g.bh) return {pl, block % g.bw, block / g.bw};
        block -= g.bw * g.bh;
    }
    throw ContractError("bit index outside the frame");
}

std::size_t block_bit_offset(const BlockCodecConfig& cfg, std::size_t width, std::size_t height,
                             const BlockLocation& where) {
    check_dims(width, height);
    std::size_t units = 0;
    for (int pl = 0; pl < where.plane; ++pl) {
        const auto g = geometry(width, height, pl);
        units += cfg.passthrough ? g.w * g.h : g.bw * g.bh;
    }
    const auto g = geometry(width, height, where.plane);
    const std::size_t cols = cfg.passthrough ? g.w : g.bw;
    const std::size_t rows = cfg.passthrough ? g.h : g.bh;
    if (where.block_x >= cols || where.block_y >= rows) throw ContractError("block outside the plane");
    units += where.block_y * cols + where.block_x;
    return units * (cfg.passthrough ? 8 : block_bits(cfg));
}

}  // namespace ltevid::video
