#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ltevid/airlink/channel.hpp"
#include "ltevid/airlink/constellation.hpp"
#include "ltevid/video/block_codec.hpp"

namespace ltevid::sim {

struct VideoSpec {
    std::string name;
    /// Raw I420 file, resolved against the config file's directory.
    std::filesystem::path path;
    /// Alternative to path: name of a procedural scene.
    std::string synthetic;
    std::size_t width = 352;
    std::size_t height = 288;
    std::size_t frames = 10;
};

struct Rational {
    long num = 2;
    long den = 3;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    bool operator==(const Rational&) const = default;
};

struct ExperimentConfig {
    std::vector<VideoSpec> videos;
    std::vector<double> ebno_db;
    std::vector<int> harq_max{1};
    std::vector<airlink::Modulation> modulations{airlink::Modulation::qam16};
    Rational code_rate;
    std::vector<int> rv_sequence{0, 2, 3, 1};
    std::string ofdm = "1.4mhz";
    std::string channel = "epa";
    /// Overrides the named channel when non-empty.
    std::vector<airlink::TapSpec> channel_taps;
    airlink::Fading fading = airlink::Fading::static_taps;
    std::size_t block_size = 6144;
    video::BlockCodecConfig codec;
    int decoder_iterations = 8;
    bool early_stop = true;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "results";
    unsigned threads = 0;
    /// Random blocks per point for the phy-ber diagnostic.
    std::size_t phy_blocks = 200;
    bool record_wall_time = false;
    /// "ebno", "harq", "modulation" or empty to pick the first swept axis.
    std::string plot_axis;
    std::vector<std::string> plot_metrics{"blocking_log10_mean", "blur_mean"};

    /// Directory relative paths are resolved against.
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::filesystem::path& p) const;

    /// "key = value" lines describing everything that affects results.
    /// output_dir and threads are left out on purpose.
    std::vector<std::string> describe() const;
};

/// Parses the key = value format. ConfigError carries the offending line.
/// require_videos=false accepts configs with no [video] section.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                              bool require_videos = true);

/// IoError when unreadable; base_dir is the file's directory.
ExperimentConfig load_config(const std::filesystem::path& file, bool require_videos = true);

/// Comma-separated list with an optional "a,b,...,c" arithmetic run.
/// Throws ConfigError (line 0) on malformed input.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace ltevid::sim
