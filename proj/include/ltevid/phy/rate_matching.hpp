#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "ltevid/phy/bits.hpp"
#include "ltevid/phy/turbo.hpp"

namespace ltevid::phy {

inline constexpr std::size_t kSubblockColumns = 32;

/// Marks a dummy (NULL) position in interleaver output.
inline constexpr std::uint8_t kNullBit = 0xFF;

/// Inter-column permutation of the sub-block interleaver.
inline constexpr std::uint8_t kSubblockColumnPermutation[kSubblockColumns] = {
    0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
    1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31};

/// Row-wise write into an R x 32 matrix with leading NULL padding, column
/// permutation, column-wise read. stream_index 2 uses the shifted read-out.
/// Output length is 32*R; NULL entries are kNullBit.
Bits subblock_interleave(std::span<const std::uint8_t> stream, int stream_index);

/// Where each circular-buffer position comes from. Immutable, shared by every
/// block of the same size.
class CircularBufferLayout {
public:
    explicit CircularBufferLayout(std::size_t stream_length);

    std::size_t stream_length() const noexcept { return d_; }
    std::size_t block_size() const noexcept { return d_ - 4; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t interleaved_length() const noexcept { return rows_ * kSubblockColumns; }
    std::size_t size() const noexcept { return source_.size(); }
    std::size_t non_null_count() const noexcept { return 3 * d_; }

    bool is_null(std::size_t pos) const noexcept { return source_[pos] == kNull; }
    int stream_of(std::size_t pos) const noexcept { return static_cast<int>(source_[pos] >> 28); }
    std::size_t index_of(std::size_t pos) const noexcept { return source_[pos] & 0x0FFFFFFFu; }

    /// k0 for redundancy version rv (Ncb = Kw).
    std::size_t start_offset(int rv) const;

    /// Buffer positions emitted, in order, by a length-e selection at rv.
    std::vector<std::uint32_t> selection(int rv, std::size_t e) const;

private:
    static constexpr std::uint32_t kNull = 0xFFFFFFFFu;

    std::size_t d_;
    std::size_t rows_;
    std::vector<std::uint32_t> source_;
};

/// Cached per stream length; safe to call from several threads.
std::shared_ptr<const CircularBufferLayout> circular_buffer_layout(std::size_t stream_length);

struct CircularBuffer {
    Bits w;                       // kNullBit at dummy positions
    std::vector<bool> null_mask;  // true where w holds a dummy
};

CircularBuffer build_circular_buffer(const CodedBlock& coded);

/// Emits e non-NULL bits starting at k0(rv), wrapping as needed.
Bits rate_match(const CodedBlock& coded, int rv, std::size_t e);

struct StreamLlrs {
    Llrs d0;
    Llrs d1;
    Llrs d2;
};

/// LLR accumulator over the circular buffer. Untouched positions hold 0.
class SoftBuffer {
public:
    explicit SoftBuffer(std::size_t block_size);

    const CircularBufferLayout& layout() const noexcept { return *layout_; }
    std::size_t block_size() const noexcept { return layout_->block_size(); }
    std::span<const float> llr() const noexcept { return llr_; }
    std::span<const std::uint16_t> fill_count() const noexcept { return fill_; }

    void accumulate(std::size_t pos, float value) {
        llr_[pos] += value;
        ++fill_[pos];
    }
    void reset();

    /// Inverse of the circular-buffer assembly: three K+4 streams, NULLs dropped.
    StreamLlrs to_streams() const;

private:
    std::shared_ptr<const CircularBufferLayout> layout_;
    Llrs llr_;
    std::vector<std::uint16_t> fill_;
};

/// Adds each received LLR into the buffer position rate_match read it from.
void rate_recover(std::span<const float> received, int rv, SoftBuffer& buffer);

/// Same, additionally checking the buffer was sized for block_size.
void rate_recover(std::span<const float> received, int rv, SoftBuffer& buffer, std::size_t block_size);

/// Debug dump, one line per buffer position: "index null value".
void dump_circular_buffer(std::ostream& os, const CircularBuffer& buffer);
void dump_soft_buffer(std::ostream& os, const SoftBuffer& buffer);

}  // namespace ltevid::phy
