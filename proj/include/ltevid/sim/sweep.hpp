#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ltevid/airlink/link.hpp"
#include "ltevid/metrics/report.hpp"
#include "ltevid/phy/harq.hpp"
#include "ltevid/sim/config.hpp"

namespace ltevid::sim {

/// One sweep point. Field order is the CSV column order.
struct RunRecord {
    std::string video;
    double ebno_db = 0;
    int harq_max = 1;
    std::string modulation;
    std::string code_rate;
    std::uint64_t seed = 0;
    std::size_t blocks_total = 0;
    std::size_t blocks_failed = 0;
    double residual_ber = 0;
    double blocking_mean = 0;
    double blocking_log10_mean = 0;
    double blur_mean = 0;
    double psnr_mean_db = 0;
    double ssim_mean = 0;
    double wall_time_s = 0;
};

struct PointResult {
    RunRecord record;
    metrics::QualityReport report;
};

/// Clean encode/decode of a source, the reference every point is scored against.
struct VideoBaseline {
    std::string name;
    video::VideoSequence clean;
    metrics::QualityReport report;
};

struct SweepResult {
    std::vector<PointResult> points;
    std::vector<VideoBaseline> baselines;

    std::vector<RunRecord> records() const;
};

struct SweepOptions {
    /// 0 runs sequentially.
    unsigned threads = 0;
    /// When set, received sequences are written here.
    std::filesystem::path dump_dir;
    /// Called once per finished point, possibly from worker threads.
    std::function<void(const RunRecord&)> progress;
};

/// Rate-matched bits per transmission: round(K / R), rounded up to whole symbols.
std::size_t transmission_bits(std::size_t block_size, double code_rate, int bits_per_symbol);

/// Seed of the random stream for one transport block. HARQ depth and Eb/N0
/// are not part of the key, so every value on those axes sees the same
/// channel draws and the same unit-variance noise.
std::uint64_t block_seed(std::uint64_t master, std::size_t video, std::size_t modulation, std::size_t block);

/// Transmit chain for one (modulation, Eb/N0, HARQ depth) point.
class LinkChain {
public:
    LinkChain(const ExperimentConfig& cfg, airlink::Modulation modulation, double ebno_db, int harq_max);

    /// Sends one CRC-attached block. The channel realization is drawn first,
    /// then noise for each transmission, all from rng.
    phy::HarqOutcome send(std::span<const std::uint8_t> info_with_crc, airlink::Rng& rng,
                          phy::TurboDecoder& decoder) const;

    const phy::HarqParams& harq() const noexcept { return harq_; }
    const airlink::AirLink& link() const noexcept { return link_; }

private:
    airlink::AirLink link_;
    phy::HarqParams harq_;
};

/// Profile named or listed in the config, on the config's OFDM sample grid.
airlink::ChannelProfile channel_profile(const ExperimentConfig& cfg);

/// Loads or synthesises a configured video. IoError / FramingError on failure.
video::VideoSequence load_video(const ExperimentConfig& cfg, const VideoSpec& spec);

/// Every (video, modulation, harq, ebno) combination, in that nesting order.
/// All videos are loaded before any simulation starts.
SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& options = {});

/// Codec-free diagnostic: random payloads, phy_blocks per point.
struct PhyPoint {
    double ebno_db = 0;
    int harq_max = 1;
    std::string modulation;
    std::size_t blocks = 0;
    std::size_t failed = 0;
    std::size_t bit_errors = 0;
    std::size_t bits = 0;

    double bler() const { return blocks ? static_cast<double>(failed) / static_cast<double>(blocks) : 0.0; }
    double ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
};

std::vector<PhyPoint> run_phy_ber(const ExperimentConfig& cfg, unsigned threads = 0);

}  // namespace ltevid::sim
