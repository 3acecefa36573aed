#include "ltevid/phy/rate_matching.hpp"

#include <map>
#include <mutex>
#include <ostream>
#include <string>

#include "ltevid/errors.hpp"

namespace ltevid::phy {
namespace {

std::size_t rows_for(std::size_t d) { return (d + kSubblockColumns - 1) / kSubblockColumns; }

// Index into the padded row-major matrix y read at output position k.
std::size_t subblock_read_index(std::size_t k, std::size_t rows, int stream_index) {
    const std::size_t kpi = rows * kSubblockColumns;
    const std::size_t base = kSubblockColumnPermutation[k / rows] + kSubblockColumns * (k % rows);
    return stream_index == 2 ? (base + 1) % kpi : base;
}

void check_rv(int rv) {
    if (rv < 0 || rv > 3) throw ContractError("redundancy version must be 0..3, got " + std::to_string(rv));
}

}  // namespace

Bits subblock_interleave(std::span<const std::uint8_t> stream, int stream_index) {
    if (stream_index < 0 || stream_index > 2) throw ContractError("stream_index must be 0, 1 or 2");
    const std::size_t d = stream.size();
    const std::size_t rows = rows_for(d);
    const std::size_t kpi = rows * kSubblockColumns;
    const std::size_t nd = kpi - d;
    Bits out(kpi);
    for (std::size_t k = 0; k < kpi; ++k) {
        const std::size_t j = subblock_read_index(k, rows, stream_index);
        out[k] = j < nd ? kNullBit : stream[j - nd];
    }
    return out;
}

CircularBufferLayout::CircularBufferLayout(std::size_t stream_length)
    : d_(stream_length), rows_(rows_for(stream_length)) {
    if (stream_length == 0 || stream_length >= (1u << 28))
        throw ContractError("circular buffer: bad stream length");
    const std::size_t kpi = interleaved_length();
    const std::size_t nd = kpi - d_;
    source_.assign(3 * kpi, kNull);
    auto origin = [&](std::size_t k, int stream) -> std::uint32_t {
        const std::size_t j = subblock_read_index(k, rows_, stream);
        return j < nd ? kNull : static_cast<std::uint32_t>((stream << 28) | (j - nd));
    };
    for (std::size_t k = 0; k < kpi; ++k) {
        source_[k] = origin(k, 0);
        source_[kpi + 2 * k] = origin(k, 1);
        source_[kpi + 2 * k + 1] = origin(k, 2);
    }
}

std::size_t CircularBufferLayout::start_offset(int rv) const {
    check_rv(rv);
    const std::size_t ncb = size();
    const std::size_t r = rows_;
    return r * (2 * ((ncb + 8 * r - 1) / (8 * r)) * static_cast<std::size_t>(rv) + 2);
}

std::vector<std::uint32_t> CircularBufferLayout::selection(int rv, std::size_t e) const {
    const std::size_t ncb = size();
    std::size_t pos = start_offset(rv) % ncb;
    std::vector<std::uint32_t> out;
    out.reserve(e);
    while (out.size() < e) {
        if (source_[pos] != kNull) out.push_back(static_cast<std::uint32_t>(pos));
        if (++pos == ncb) pos = 0;
    }
    return out;
}

std::shared_ptr<const CircularBufferLayout> circular_buffer_layout(std::size_t stream_length) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const CircularBufferLayout>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[stream_length];
    if (!slot) slot = std::make_shared<const CircularBufferLayout>(stream_length);
    return slot;
}

CircularBuffer build_circular_buffer(const CodedBlock& coded) {
    const auto layout = circular_buffer_layout(coded.stream_length());
    const Bits* streams[3] = {&coded.d0, &coded.d1, &coded.d2};
    CircularBuffer buf;
    buf.w.resize(layout->size());
    buf.null_mask.resize(layout->size());
    for (std::size_t p = 0; p < layout->size(); ++p) {
        const bool null = layout->is_null(p);
        buf.null_mask[p] = null;
        buf.w[p] = null ? kNullBit : (*streams[layout->stream_of(p)])[layout->index_of(p)];
    }
    return buf;
}

Bits rate_match(const CodedBlock& coded, int rv, std::size_t e) {
    if (coded.d1.size() != coded.d0.size() || coded.d2.size() != coded.d0.size())
        throw ContractError("rate_match: coded streams differ in length");
    if (e == 0) throw ContractError("rate_match: E must be at least 1");
    const auto layout = circular_buffer_layout(coded.stream_length());
    const Bits* streams[3] = {&coded.d0, &coded.d1, &coded.d2};
    Bits out;
    out.reserve(e);
    for (std::uint32_t p : layout->selection(rv, e))
        out.push_back((*streams[layout->stream_of(p)])[layout->index_of(p)]);
    return out;
}

SoftBuffer::SoftBuffer(std::size_t block_size)
    : layout_(circular_buffer_layout(block_size + 4)),
      llr_(layout_->size(), 0.0f),
      fill_(layout_->size(), 0) {}

void SoftBuffer::reset() {
    std::fill(llr_.begin(), llr_.end(), 0.0f);
    std::fill(fill_.begin(), fill_.end(), 0);
}

StreamLlrs SoftBuffer::to_streams() const {
    const std::size_t d = layout_->stream_length();
    StreamLlrs out{Llrs(d, 0.0f), Llrs(d, 0.0f), Llrs(d, 0.0f)};
    Llrs* streams[3] = {&out.d0, &out.d1, &out.d2};
    for (std::size_t p = 0; p < llr_.size(); ++p)
        if (!layout_->is_null(p)) (*streams[layout_->stream_of(p)])[layout_->index_of(p)] = llr_[p];
    return out;
}

void rate_recover(std::span<const float> received, int rv, SoftBuffer& buffer) {
    const auto positions = buffer.layout().selection(rv, received.size());
    for (std::size_t j = 0; j < received.size(); ++j) buffer.accumulate(positions[j], received[j]);
}

void rate_recover(std::span<const float> received, int rv, SoftBuffer& buffer, std::size_t block_size) {
    if (buffer.block_size() != block_size)
        throw ContractError("rate_recover: soft buffer sized for K=" + std::to_string(buffer.block_size()) +
                            ", transmission has K=" + std::to_string(block_size));
    rate_recover(received, rv, buffer);
}

void dump_circular_buffer(std::ostream& os, const CircularBuffer& buffer) {
    for (std::size_t p = 0; p < buffer.w.size(); ++p) {
        os << p << ' ' << (buffer.null_mask[p] ? 1 : 0) << ' ';
        if (buffer.null_mask[p])
            os << '-';
        else
            os << static_cast<int>(buffer.w[p]);
        os << '\n';
    }
}

void dump_soft_buffer(std::ostream& os, const SoftBuffer& buffer) {
    const auto& layout = buffer.layout();
    for (std::size_t p = 0; p < layout.size(); ++p)
        os << p << ' ' << (layout.is_null(p) ? 1 : 0) << ' ' << buffer.llr()[p] << '\n';
}

}  // namespace ltevid::phy
