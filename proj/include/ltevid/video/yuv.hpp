#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ltevid/errors.hpp"

namespace ltevid::video {

/// One 8-bit sample plane, row-major.
struct Plane {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> samples;

    Plane() = default;
    Plane(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), samples(w * h, fill) {}

    std::uint8_t& at(std::size_t x, std::size_t y) { return samples[y * width + x]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return samples[y * width + x]; }

    bool operator==(const Plane&) const = default;
};

/// Planar 4:2:0 frame. Chroma planes are half size in each direction.
struct Frame {
    Plane y, u, v;

    Frame() = default;
    /// Throws ContractError on odd or zero dimensions.
    Frame(std::size_t width, std::size_t height, std::uint8_t fill = 128);

    std::size_t width() const noexcept { return y.width; }
    std::size_t height() const noexcept { return y.height; }

    /// 0 = Y, 1 = U, 2 = V.
    Plane& plane(int index);
    const Plane& plane(int index) const;

    /// Bytes of one I420 frame: 1.5 * width * height.
    static std::size_t byte_size(std::size_t width, std::size_t height) noexcept {
        return width * height + 2 * (width / 2) * (height / 2);
    }

    bool operator==(const Frame&) const = default;
};

struct VideoSequence {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Frame> frames;

    std::size_t size() const noexcept { return frames.size(); }
    bool operator==(const VideoSequence&) const = default;
};

/// The stream ended inside a frame.
class PartialFrameError : public FramingError {
public:
    PartialFrameError(std::size_t complete_frames, std::size_t trailing_bytes);
    std::size_t complete_frames() const noexcept { return complete_; }

private:
    std::size_t complete_;
};

/// Reads I420 frames until the stream ends, or at most max_frames when
/// non-zero. Asking for more frames than the stream holds is a FramingError.
VideoSequence read_yuv(std::istream& in, std::size_t width, std::size_t height, std::size_t max_frames = 0);
VideoSequence read_yuv(std::span<const std::uint8_t> bytes, std::size_t width, std::size_t height,
                       std::size_t max_frames = 0);
/// IoError when the file cannot be opened.
VideoSequence read_yuv_file(const std::filesystem::path& path, std::size_t width, std::size_t height,
                            std::size_t max_frames = 0);

void write_yuv(std::ostream& out, const VideoSequence& seq);
std::vector<std::uint8_t> write_yuv_bytes(const VideoSequence& seq);
/// Written to a temporary sibling and renamed into place.
void write_yuv_file(const std::filesystem::path& path, const VideoSequence& seq);

}  // namespace ltevid::video
