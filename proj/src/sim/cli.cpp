#include "ltevid/sim/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>

#include "ltevid/errors.hpp"
#include "ltevid/metrics/report.hpp"
#include "ltevid/sim/csv.hpp"
#include "ltevid/sim/svg_plot.hpp"
#include "ltevid/sim/sweep.hpp"

namespace ltevid::sim {
namespace {

constexpr int kOk = 0, kFailure = 1, kConfig = 2, kIo = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
};

ExperimentConfig load(const std::string& path, const Overrides& o, bool require_videos) {
    auto cfg = load_config(path, require_videos);
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    for (const auto& m : cfg.plot_metrics)
        if (!is_plot_metric(m)) throw ConfigError("unknown plot metric '" + m + "'");
    return cfg;
}

std::filesystem::path output_dir(const ExperimentConfig& cfg, const Overrides& o) {
    return o.out.empty() ? cfg.resolve(cfg.output_dir) : std::filesystem::path(o.out);
}

int run_command(const std::string& config_path, const Overrides& o, bool dump, std::ostream& out) {
    const auto cfg = load(config_path, o, true);
    const auto dir = output_dir(cfg, o);
    std::filesystem::create_directories(dir);
    const std::string stem = std::filesystem::path(config_path).stem().string();

    SweepOptions opt;
    opt.threads = cfg.threads;
    if (dump) opt.dump_dir = dir / (stem + "_received");
    std::mutex m;
    opt.progress = [&](const RunRecord& r) {
        std::lock_guard lock(m);
        out << "  " << r.video << " " << r.modulation << " harq=" << r.harq_max << " ebno=" << format_number(r.ebno_db)
            << " failed=" << r.blocks_failed << "/" << r.blocks_total << " log10_blocking=" << format_number(r.blocking_log10_mean)
            << " blur=" << format_number(r.blur_mean) << '\n';
        out.flush();
    };
    const auto result = run_sweep(cfg, opt);
    const auto records = result.records();
    const auto csv = dir / (stem + ".csv");
    emit_csv(records, csv, run_header(cfg, metrics::MetricParams{}, result.baselines));
    out << "wrote " << csv.string() << '\n';
    for (const auto& p : emit_plots(records, default_axis(cfg), cfg.plot_metrics, dir, stem)) out << "wrote " << p.string() << '\n';
    return kOk;
}

int metrics_command(const std::string& ref_path, const std::string& test_path, std::size_t width, std::size_t height,
                    std::size_t frames, std::ostream& out) {
    const auto ref = video::read_yuv_file(ref_path, width, height, frames);
    const auto test = video::read_yuv_file(test_path, width, height, frames);
    if (ref.size() != test.size())
        throw ConfigError("frame counts differ: " + std::to_string(ref.size()) + " vs " + std::to_string(test.size()));
    const auto r = metrics::score_sequence(ref, test);
    out << "frame,blocking,blocking_log10,blur,psnr_db,ssim\n";
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
        const auto& f = r.frames[i];
        out << i << ',' << format_number(f.blocking) << ',' << format_number(f.blocking_log10) << ','
            << format_number(f.blur) << ',' << format_number(f.psnr_db) << ',' << format_number(f.ssim) << '\n';
    }
    auto agg = [&](const char* name, const metrics::Aggregate& a) {
        out << name << " mean=" << format_number(a.mean) << " median=" << format_number(a.median) << '\n';
    };
    agg("blocking", r.blocking);
    agg("blocking_log10", r.blocking_log10);
    agg("blur", r.blur);
    agg("psnr_db", r.psnr_db);
    agg("ssim", r.ssim);
    return kOk;
}

int phy_ber_command(const std::string& config_path, const Overrides& o, std::ostream& out) {
    const auto cfg = load(config_path, o, false);
    const auto points = run_phy_ber(cfg, cfg.threads);
    std::ostringstream table;
    table << "# phy-ber block_size=" << cfg.block_size << " code_rate=" << cfg.code_rate.str()
          << " channel=" << cfg.channel << " fading=" << airlink::fading_name(cfg.fading) << " seed=" << cfg.seed << '\n';
    table << "modulation,harq_max,ebno_db,blocks,blocks_failed,bler,ber\n";
    for (const auto& p : points)
        table << p.modulation << ',' << p.harq_max << ',' << format_number(p.ebno_db) << ',' << p.blocks << ','
              << p.failed << ',' << format_number(p.bler()) << ',' << format_number(p.ber()) << '\n';
    out << table.str();
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        const auto path = std::filesystem::path(o.out) / (std::filesystem::path(config_path).stem().string() + "_phy.csv");
        std::ofstream f(path);
        if (!f) throw IoError("cannot write " + path.string());
        f << table.str();
        out << "wrote " << path.string() << '\n';
    }
    return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"LTE downlink video link simulator"};
    app.require_subcommand(1);

    Overrides o;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string config_path;
    bool dump = false;

    auto* run = app.add_subcommand("run", "run the sweep in a config file, write CSV and SVG plots");
    run->add_option("config", config_path, "experiment config")->required();
    auto* run_seed = run->add_option("--seed", seed, "override the master seed");
    auto* run_threads = run->add_option("--threads", threads, "worker threads (0 = sequential)");
    run->add_option("--out", o.out, "output directory (default: output_dir from the config)");
    run->add_flag("--dump-video", dump, "write received sequences as raw I420");

    std::string ref_path, test_path;
    std::size_t width = 0, height = 0, frames = 0;
    auto* met = app.add_subcommand("metrics", "score a received I420 file against a reference");
    met->add_option("ref", ref_path, "reference I420 file")->required();
    met->add_option("test", test_path, "test I420 file")->required();
    met->add_option("--width", width, "luma width")->required();
    met->add_option("--height", height, "luma height")->required();
    met->add_option("--frames", frames, "frames to read (0 = all)");

    auto* phy = app.add_subcommand("phy-ber", "BLER/BER per sweep point with random payloads");
    phy->add_option("config", config_path, "experiment config")->required();
    auto* phy_seed = phy->add_option("--seed", seed, "override the master seed");
    auto* phy_threads = phy->add_option("--threads", threads, "worker threads (0 = sequential)");
    phy->add_option("--out", o.out, "also write <config>_phy.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kConfig;
    }
    if (run_seed->count() || phy_seed->count()) o.seed = seed;
    if (run_threads->count() || phy_threads->count()) o.threads = threads;

    try {
        if (run->parsed()) return run_command(config_path, o, dump, out);
        if (met->parsed()) return metrics_command(ref_path, test_path, width, height, frames, out);
        if (phy->parsed()) return phy_ber_command(config_path, o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const FramingError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kConfig;
}

}  // namespace ltevid::sim
