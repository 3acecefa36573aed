#include "ltevid/video/yuv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace ltevid::video {

Frame::Frame(std::size_t width, std::size_t height, std::uint8_t fill) {
    if (width == 0 || height == 0 || width % 2 || height % 2)
        throw ContractError("frame dimensions must be even and non-zero, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    y = Plane(width, height, fill);
    u = Plane(width / 2, height / 2, fill);
    v = Plane(width / 2, height / 2, fill);
}

Plane& Frame::plane(int index) {
    return const_cast<Plane&>(static_cast<const Frame&>(*this).plane(index));
}

const Plane& Frame::plane(int index) const {
    switch (index) {
        case 0: return y;
        case 1: return u;
        case 2: return v;
    }
    throw ContractError("plane index out of range");
}

PartialFrameError::PartialFrameError(std::size_t complete_frames, std::size_t trailing_bytes)
    : FramingError("stream ends inside a frame: " + std::to_string(complete_frames) + " complete frames, " +
                   std::to_string(trailing_bytes) + " trailing bytes"),
      complete_(complete_frames) {}

VideoSequence read_yuv(std::istream& in, std::size_t width, std::size_t height, std::size_t max_frames) {
    VideoSequence seq;
    seq.width = width;
    seq.height = height;
    Frame proto(width, height);
    const std::size_t frame_bytes = Frame::byte_size(width, height);
    std::vector<char> buf(frame_bytes);

    while (max_frames == 0 || seq.frames.size() < max_frames) {
        in.read(buf.data(), static_cast<std::streamsize>(frame_bytes));
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        if (got < frame_bytes) throw PartialFrameError(seq.frames.size(), got);
        Frame f = proto;
        const char* p = buf.data();
        for (int i = 0; i < 3; ++i) {
            auto& s = f.plane(i).samples;
            std::copy(p, p + s.size(), reinterpret_cast<char*>(s.data()));
            p += s.size();
        }
        seq.frames.push_back(std::move(f));
    }
    if (max_frames && seq.frames.size() < max_frames)
        throw FramingError("stream holds " + std::to_string(seq.frames.size()) + " frames, " +
                           std::to_string(max_frames) + " requested");
    return seq;
}

VideoSequence read_yuv(std::span<const std::uint8_t> bytes, std::size_t width, std::size_t height,
                       std::size_t max_frames) {
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    return read_yuv(in, width, height, max_frames);
}

VideoSequence read_yuv_file(const std::filesystem::path& path, std::size_t width, std::size_t height,
                            std::size_t max_frames) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_yuv(in, width, height, max_frames);
}

void write_yuv(std::ostream& out, const VideoSequence& seq) {
    for (const auto& f : seq.frames)
        for (int i = 0; i < 3; ++i) {
            const auto& s = f.plane(i).samples;
            out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
        }
}

std::vector<std::uint8_t> write_yuv_bytes(const VideoSequence& seq) {
    std::ostringstream out;
    write_yuv(out, seq);
    const std::string s = out.str();
    return {s.begin(), s.end()};
}

void write_yuv_file(const std::filesystem::path& path, const VideoSequence& seq) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        write_yuv(out, seq);
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace ltevid::video
