#include "ltevid/sim/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ltevid/errors.hpp"
#include "ltevid/phy/crc.hpp"
#include "ltevid/video/block_codec.hpp"
#include "ltevid/video/synthetic.hpp"
#include "ltevid/video/transport.hpp"

namespace ltevid::sim {
namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string format_ebno(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

struct Point {
    std::size_t video, modulation, harq, ebno;
};

}  // namespace

std::vector<RunRecord> SweepResult::records() const {
    std::vector<RunRecord> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.record);
    return out;
}

std::size_t transmission_bits(std::size_t block_size, double code_rate, int bits_per_symbol) {
    if (!(code_rate > 0) || code_rate > 1) throw ContractError("code rate must be in (0, 1]");
    const auto e = static_cast<std::size_t>(std::llround(static_cast<double>(block_size) / code_rate));
    const auto q = static_cast<std::size_t>(bits_per_symbol);
    return (e + q - 1) / q * q;
}

std::uint64_t block_seed(std::uint64_t master, std::size_t video, std::size_t modulation, std::size_t block) {
    std::uint64_t h = mix(master);
    h = mix(h ^ static_cast<std::uint64_t>(video));
    h = mix(h ^ static_cast<std::uint64_t>(modulation));
    return mix(h ^ static_cast<std::uint64_t>(block));
}

airlink::ChannelProfile channel_profile(const ExperimentConfig& cfg) {
    const auto ofdm = airlink::OfdmConfig::preset(cfg.ofdm);
    if (!cfg.channel_taps.empty())
        return airlink::ChannelProfile::from_taps("custom", cfg.channel_taps, ofdm.sample_rate(), cfg.fading);
    return airlink::ChannelProfile::preset(cfg.channel, ofdm.sample_rate(), cfg.fading);
}

LinkChain::LinkChain(const ExperimentConfig& cfg, airlink::Modulation modulation, double ebno_db, int harq_max)
    : link_(modulation, airlink::OfdmConfig::preset(cfg.ofdm), channel_profile(cfg),
            airlink::noise_variance(ebno_db, cfg.code_rate.value(), airlink::bits_per_symbol(modulation))) {
    harq_.e = transmission_bits(cfg.block_size, cfg.code_rate.value(), airlink::bits_per_symbol(modulation));
    harq_.rv_sequence = cfg.rv_sequence;
    harq_.max_tx = harq_max;
    harq_.decoder_iterations = cfg.decoder_iterations;
    harq_.crc_early_stop = cfg.early_stop;
}

phy::HarqOutcome LinkChain::send(std::span<const std::uint8_t> info_with_crc, airlink::Rng& rng,
                                 phy::TurboDecoder& decoder) const {
    const auto channel = airlink::realize(link_.profile(), rng);
    return phy::run_harq(
        info_with_crc, harq_,
        [&](std::span<const std::uint8_t> bits, int) { return link_.transmit(bits, channel, rng); }, &decoder);
}

video::VideoSequence load_video(const ExperimentConfig& cfg, const VideoSpec& spec) {
    if (!spec.synthetic.empty())
        return video::synthesize({spec.synthetic, spec.width, spec.height, spec.frames, 1});
    return video::read_yuv_file(cfg.resolve(spec.path), spec.width, spec.height, spec.frames);
}

SweepResult run_sweep(const ExperimentConfig& cfg, const SweepOptions& options) {
    if (cfg.videos.empty() || cfg.ebno_db.empty() || cfg.harq_max.empty() || cfg.modulations.empty())
        throw ConfigError("sweep axes must be non-empty");
    cfg.codec.validate();

    struct Source {
        phy::Bits payload;
        video::Segmentation segments;
    };
    SweepResult result;
    std::vector<Source> sources;
    for (const auto& spec : cfg.videos) {
        const auto seq = load_video(cfg, spec);
        Source s;
        s.payload = video::encode_sequence(seq, cfg.codec);
        s.segments = video::segment(s.payload, cfg.block_size);
        VideoBaseline b;
        b.name = spec.name;
        b.clean = video::decode_sequence(s.payload, cfg.codec, spec.width, spec.height);
        b.report = metrics::score_sequence(b.clean, b.clean);
        result.baselines.push_back(std::move(b));
        sources.push_back(std::move(s));
    }
    // Checked once up front so bad numerology fails before any work.
    channel_profile(cfg).check_against(airlink::OfdmConfig::preset(cfg.ofdm));

    std::vector<Point> points;
    for (std::size_t v = 0; v < cfg.videos.size(); ++v)
        for (std::size_t m = 0; m < cfg.modulations.size(); ++m)
            for (std::size_t h = 0; h < cfg.harq_max.size(); ++h)
                for (std::size_t e = 0; e < cfg.ebno_db.size(); ++e) points.push_back({v, m, h, e});
    result.points.resize(points.size());

    const unsigned threads = options.threads;
    parallel_for(points.size(), threads, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const Point& p = points[i];
        const auto& spec = cfg.videos[p.video];
        const auto& src = sources[p.video];
        const auto modulation = cfg.modulations[p.modulation];
        const LinkChain chain(cfg, modulation, cfg.ebno_db[p.ebno], cfg.harq_max[p.harq]);
        phy::TurboDecoder decoder(cfg.block_size);

        std::vector<phy::Bits> received;
        received.reserve(src.segments.payloads.size());
        std::size_t failed = 0, bit_errors = 0;
        for (std::size_t b = 0; b < src.segments.payloads.size(); ++b) {
            airlink::Rng rng(block_seed(cfg.seed, p.video, p.modulation, b));
            const auto info = phy::crc24a_attach(src.segments.payloads[b]);
            auto outcome = chain.send(info, rng, decoder);
            if (!outcome.ack_at_tx) ++failed;
            outcome.final_bits.resize(src.segments.map.chunk_bits);
            const auto n = src.segments.map.chunk_payload(b);
            for (std::size_t k = 0; k < n; ++k) bit_errors += outcome.final_bits[k] != src.segments.payloads[b][k];
            received.push_back(std::move(outcome.final_bits));
        }

        const auto bits = video::reassemble(received, src.segments.map);
        const auto rx = video::decode_sequence(bits, cfg.codec, spec.width, spec.height);
        auto report = metrics::score_sequence(result.baselines[p.video].clean, rx);

        RunRecord r;
        r.video = spec.name;
        r.ebno_db = cfg.ebno_db[p.ebno];
        r.harq_max = cfg.harq_max[p.harq];
        r.modulation = std::string(airlink::modulation_name(modulation));
        r.code_rate = cfg.code_rate.str();
        r.seed = cfg.seed;
        r.blocks_total = src.segments.payloads.size();
        r.blocks_failed = failed;
        r.residual_ber = static_cast<double>(bit_errors) / static_cast<double>(src.segments.map.payload_bits);
        r.blocking_mean = report.blocking.mean;
        r.blocking_log10_mean = report.blocking_log10.mean;
        r.blur_mean = report.blur.mean;
        r.psnr_mean_db = report.psnr_db.mean;
        r.ssim_mean = report.ssim.mean;
        if (cfg.record_wall_time)
            r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (!options.dump_dir.empty()) {
            std::filesystem::create_directories(options.dump_dir);
            video::write_yuv_file(options.dump_dir / (r.video + "_" + r.modulation + "_h" + std::to_string(r.harq_max) +
                                                      "_eb" + format_ebno(r.ebno_db) + ".yuv"),
                                  rx);
        }
        result.points[i] = {std::move(r), std::move(report)};
        if (options.progress) options.progress(result.points[i].record);
    });
    return result;
}

std::vector<PhyPoint> run_phy_ber(const ExperimentConfig& cfg, unsigned threads) {
    channel_profile(cfg).check_against(airlink::OfdmConfig::preset(cfg.ofdm));
    std::vector<Point> points;
    for (std::size_t m = 0; m < cfg.modulations.size(); ++m)
        for (std::size_t h = 0; h < cfg.harq_max.size(); ++h)
            for (std::size_t e = 0; e < cfg.ebno_db.size(); ++e) points.push_back({0, m, h, e});
    std::vector<PhyPoint> out(points.size());
    const std::size_t payload = cfg.block_size - phy::kCrc24Length;

    parallel_for(points.size(), threads, [&](std::size_t i) {
        const Point& p = points[i];
        const auto modulation = cfg.modulations[p.modulation];
        const LinkChain chain(cfg, modulation, cfg.ebno_db[p.ebno], cfg.harq_max[p.harq]);
        phy::TurboDecoder decoder(cfg.block_size);
        PhyPoint r;
        r.ebno_db = cfg.ebno_db[p.ebno];
        r.harq_max = cfg.harq_max[p.harq];
        r.modulation = std::string(airlink::modulation_name(modulation));
        for (std::size_t b = 0; b < cfg.phy_blocks; ++b) {
            // Stream index outside any video's.
            airlink::Rng rng(block_seed(cfg.seed, ~std::size_t{0}, p.modulation, b));
            phy::Bits bits(payload);
            for (auto& x : bits) x = static_cast<std::uint8_t>(rng() & 1u);
            const auto outcome = chain.send(phy::crc24a_attach(bits), rng, decoder);
            ++r.blocks;
            if (!outcome.ack_at_tx) ++r.failed;
            for (std::size_t k = 0; k < payload; ++k) r.bit_errors += outcome.final_bits[k] != bits[k];
            r.bits += payload;
        }
        out[i] = r;
    });
    return out;
}

}  // namespace ltevid::sim
