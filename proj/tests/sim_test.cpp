#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ltevid/errors.hpp"
#include "ltevid/sim/cli.hpp"
#include "ltevid/sim/config.hpp"
#include "ltevid/sim/csv.hpp"
#include "ltevid/sim/svg_plot.hpp"
#include "ltevid/sim/sweep.hpp"
#include "ltevid/video/synthetic.hpp"

using namespace ltevid::sim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ltevid_sim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

const char* kTiny = R"(
ebno_db = 60
block_size = 512
[video]
name = tiny
synthetic = rhino
width = 64
height = 48
frames = 2
)";

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "lte_vidsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return rc;
}

RunRecord record(const std::string& video, double ebno, int harq = 1, const std::string& mod = "16qam") {
    RunRecord r;
    r.video = video;
    r.ebno_db = ebno;
    r.harq_max = harq;
    r.modulation = mod;
    r.code_rate = "2/3";
    r.seed = 1;
    r.blocks_total = 10;
    r.blocking_mean = 100 - ebno;
    r.blocking_log10_mean = 2 - ebno / 10;
    r.blur_mean = 0.8;
    r.psnr_mean_db = 30 + ebno;
    r.ssim_mean = 0.9;
    return r;
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("minimal config gets documented defaults") {
        const auto cfg = parse_config("ebno_db = 4\n[video]\nname = a\npath = a.yuv\n", "/data");
        CHECK(cfg.ebno_db == std::vector<double>{4});
        CHECK(cfg.harq_max == std::vector<int>{1});
        REQUIRE(cfg.modulations.size() == 1);
        CHECK(cfg.modulations[0] == ltevid::airlink::Modulation::qam16);
        CHECK(cfg.code_rate == Rational{2, 3});
        CHECK(cfg.rv_sequence == std::vector<int>{0, 2, 3, 1});
        CHECK(cfg.block_size == 6144);
        CHECK(cfg.decoder_iterations == 8);
        CHECK(cfg.codec.quant_step == 8.0);
        CHECK(cfg.codec.coeffs_kept == 16);
        CHECK(cfg.codec.bits_per_coeff == 8);
        CHECK(cfg.ofdm == "1.4mhz");
        CHECK(cfg.channel == "epa");
        REQUIRE(cfg.videos.size() == 1);
        CHECK(cfg.videos[0].width == 352);
        CHECK(cfg.videos[0].height == 288);
        CHECK(cfg.videos[0].frames == 10);
        CHECK(cfg.resolve(cfg.videos[0].path) == fs::path("/data/a.yuv"));
    }

    TEST_CASE("ellipsis lists") {
        CHECK(parse_number_list("0,2,4,...,20") == std::vector<double>{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
        CHECK(parse_number_list("0, 0.5, ..., 2") == std::vector<double>{0, 0.5, 1, 1.5, 2});
        CHECK(parse_number_list("1,...,4") == std::vector<double>{1, 2, 3, 4});
        CHECK(parse_number_list("3") == std::vector<double>{3});
        CHECK_THROWS_AS(parse_number_list("0,3,...,10"), ltevid::ConfigError);
        CHECK_THROWS_AS(parse_number_list("...,4"), ltevid::ConfigError);
        CHECK_THROWS_AS(parse_number_list("1,,2"), ltevid::ConfigError);
        const auto cfg = parse_config("ebno_db = 0,2,4,...,20\nharq_max = 1,...,4\n", {}, false);
        CHECK(cfg.ebno_db.size() == 11);
        CHECK(cfg.harq_max == std::vector<int>{1, 2, 3, 4});
    }

    TEST_CASE("errors carry line numbers") {
        auto line_of = [](const char* text) -> std::size_t {
            try {
                parse_config(text, {}, false);
            } catch (const ltevid::ConfigError& e) {
                return e.line();
            }
            return 0;
        };
        CHECK(line_of("ebno_db = 1\n# note\nebno_db = 2\n") == 3);
        CHECK(line_of("ebno_db = 1\nebn0_db = 2\n") == 2);
        CHECK(line_of("ebno_db = 1\nharq_max = 5\n") == 2);
        CHECK(line_of("ebno_db = x\n") == 1);
        CHECK(line_of("ebno_db = 1\nmodulation = 32qam\n") == 2);
        CHECK(line_of("ebno_db = 1\n[audio]\n") == 2);
        CHECK(line_of("ebno_db = 1\ncode_rate = 3/2\n") == 2);
        CHECK(line_of("ebno_db = 1\nblock_size = 100\n") == 2);
        CHECK(line_of("ebno_db = 1\n[video]\nname = a\ncolour = red\n") == 4);
        CHECK(line_of("ebno_db = 1\n[video]\nname = a\n") == 2);  // neither path nor synthetic
        CHECK(line_of("ebno_db = 1\nthreads\n") == 2);
        CHECK_THROWS_WITH_AS(parse_config("harq_max = 2\n", {}, false), "missing required key 'ebno_db'",
                             ltevid::ConfigError);
        CHECK_THROWS_AS(parse_config("ebno_db = 1\n"), ltevid::ConfigError);
    }

    TEST_CASE("values") {
        const auto cfg = parse_config(R"(
ebno_db = 1   # trailing comment
code_rate = 0.5
modulation = QPSK, 64qam
rv_sequence = 0,1,2,3
channel_taps = 0:0, 520:-3
fading = rayleigh_block
codec = passthrough
early_stop = no
seed = 18446744073709551615
)",
                                      {}, false);
        CHECK(cfg.code_rate == Rational{1, 2});
        CHECK(cfg.modulations.size() == 2);
        CHECK(cfg.rv_sequence == std::vector<int>{0, 1, 2, 3});
        CHECK(cfg.channel == "custom");
        CHECK(cfg.channel_taps.size() == 2);
        CHECK(cfg.fading == ltevid::airlink::Fading::rayleigh_block);
        CHECK(cfg.codec.passthrough);
        CHECK_FALSE(cfg.early_stop);
        CHECK(cfg.seed == 18446744073709551615ull);
        CHECK(channel_profile(cfg).delays == std::vector<std::size_t>{0, 1});
    }

    TEST_CASE("describe leaves out output location and threads") {
        auto cfg = parse_config("ebno_db = 1\noutput_dir = a\nthreads = 3\n", {}, false);
        const auto a = cfg.describe();
        cfg.output_dir = "elsewhere";
        cfg.threads = 0;
        CHECK(cfg.describe() == a);
        for (const auto& l : a) {
            CHECK(l.find("output_dir") == std::string::npos);
            CHECK(l.find("threads") == std::string::npos);
        }
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("transmission size") {
        CHECK(transmission_bits(6144, 2.0 / 3, 4) == 9216);
        CHECK(transmission_bits(6144, 1.0 / 3, 6) == 18432);
        CHECK(transmission_bits(40, 2.0 / 3, 6) == 60);
        CHECK(transmission_bits(40, 2.0 / 3, 4) == 60);
        CHECK(transmission_bits(104, 2.0 / 3, 4) == 156);
        CHECK_THROWS_AS(transmission_bits(40, 0.0, 2), ltevid::ContractError);
    }

    TEST_CASE("block seeds differ across keys") {
        std::set<std::uint64_t> seeds;
        for (std::size_t v = 0; v < 3; ++v)
            for (std::size_t m = 0; m < 3; ++m)
                for (std::size_t b = 0; b < 50; ++b) seeds.insert(block_seed(7, v, m, b));
        CHECK(seeds.size() == 450);
        CHECK(block_seed(7, 0, 0, 0) != block_seed(8, 0, 0, 0));
    }

    TEST_CASE("effectively noiseless point reproduces the clean decode") {
        const auto cfg = parse_config(kTiny);
        const auto res = run_sweep(cfg);
        REQUIRE(res.points.size() == 1);
        const auto& r = res.points[0].record;
        CHECK(r.blocks_failed == 0);
        CHECK(r.residual_ber == 0.0);
        CHECK(r.blocks_total == 2 * (48 + 12 + 12) * 128 / 488 + 1);
        CHECK(std::isinf(r.psnr_mean_db));
        CHECK(r.ssim_mean == 1.0);
        CHECK(r.blocking_mean == res.baselines[0].report.blocking.mean);
        CHECK(r.blur_mean == res.baselines[0].report.blur.mean);
    }

    TEST_CASE("experiment shape: 11 x 1 x 1 x 3 points") {
        const auto cfg = parse_config(R"(
ebno_db = 0,2,4,...,20
[video]
name = a
synthetic = akiyo
width = 32
height = 32
frames = 1
[video]
name = h
synthetic = harbor
width = 32
height = 32
frames = 1
[video]
name = r
synthetic = rhino
width = 32
height = 32
frames = 1
)");
        const auto res = run_sweep(cfg);
        CHECK(res.points.size() == 33);
        CHECK(res.points[0].record.video == "a");
        CHECK(res.points[11].record.video == "h");
        CHECK(res.points[12].record.ebno_db == 2.0);
        // Low Eb/N0 fails, high Eb/N0 is clean.
        CHECK(res.points[0].record.blocks_failed == res.points[0].record.blocks_total);
        CHECK(res.points[10].record.blocks_failed == 0);
    }

    TEST_CASE("results do not depend on the thread count") {
        const char* text = R"(
ebno_db = 2, 4, 6
harq_max = 1, 2
modulation = qpsk, 16qam
block_size = 1024
fading = rayleigh_block
[video]
name = tiny
synthetic = harbor
width = 64
height = 48
frames = 2
)";
        const auto cfg = parse_config(text);
        const auto a = run_sweep(cfg).records();
        SweepOptions opt;
        opt.threads = 4;
        const auto b = run_sweep(cfg, opt).records();
        std::ostringstream sa, sb;
        write_csv(sa, a);
        write_csv(sb, b);
        CHECK(sa.str() == sb.str());
        CHECK(a.size() == 12);
    }

    TEST_CASE("more HARQ transmissions never lose blocks") {
        const auto cfg = parse_config(R"(
ebno_db = 3
harq_max = 1,2,3,4
fading = rayleigh_block
block_size = 1024
[video]
name = tiny
synthetic = rhino
width = 64
height = 48
frames = 4
)");
        const auto res = run_sweep(cfg);
        REQUIRE(res.points.size() == 4);
        for (std::size_t i = 1; i < 4; ++i)
            CHECK(res.points[i].record.blocks_failed <= res.points[i - 1].record.blocks_failed);
        CHECK(res.points[3].record.blocks_failed < res.points[0].record.blocks_failed);
    }

    TEST_CASE("changing the seed keeps the bookkeeping") {
        auto cfg = parse_config(R"(
ebno_db = 5
fading = rayleigh_block
block_size = 1024
[video]
name = tiny
synthetic = harbor
width = 64
height = 48
frames = 2
)");
        const auto a = run_sweep(cfg).points[0].record;
        cfg.seed = 99;
        const auto b = run_sweep(cfg).points[0].record;
        CHECK(a.blocks_total == b.blocks_total);
        CHECK(a.video == b.video);
        CHECK(a.code_rate == b.code_rate);
        CHECK(b.seed == 99);
    }

    TEST_CASE("unreadable video fails before any point runs") {
        auto cfg = parse_config("ebno_db = 1\n[video]\nname = x\npath = /nonexistent/x.yuv\n");
        SweepOptions opt;
        int calls = 0;
        opt.progress = [&](const RunRecord&) { ++calls; };
        CHECK_THROWS_AS(run_sweep(cfg, opt), ltevid::IoError);
        CHECK(calls == 0);
    }

    TEST_CASE("phy-ber diagnostic") {
        auto cfg = parse_config("ebno_db = -4, 10\nblock_size = 256\nphy_blocks = 30\nmodulation = qpsk\n", {}, false);
        const auto pts = run_phy_ber(cfg);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].bler() == 1.0);
        CHECK(pts[0].ber() > 0.01);
        CHECK(pts[1].bler() == 0.0);
        CHECK(pts[1].blocks == 30);
    }
}

TEST_SUITE("csv") {
    TEST_CASE("one record is two lines after the comments") {
        std::ostringstream os;
        write_csv(os, {record("a", 4)}, {"first", "second"});
        const auto text = os.str();
        std::istringstream in(text);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(in, line))
            if (line.rfind("#", 0) != 0) lines.push_back(line);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] ==
              "video,ebno_db,harq_max,modulation,code_rate,seed,blocks_total,blocks_failed,residual_ber,"
              "blocking_mean,blocking_log10_mean,blur_mean,psnr_mean_db,ssim_mean,wall_time_s");
        CHECK(text.rfind("# first\n# second\n", 0) == 0);
    }

    TEST_CASE("round trip and infinite PSNR") {
        auto r = record("akiyo", 2.5, 3, "64qam");
        r.psnr_mean_db = std::numeric_limits<double>::infinity();
        r.residual_ber = 1.234567891e-5;
        r.blocking_mean = 12345.678901;
        std::ostringstream os;
        write_csv(os, {r, record("b", 4)});
        CHECK(os.str().find(",inf,") != std::string::npos);
        std::istringstream in(os.str());
        const auto back = parse_csv(in);
        REQUIRE(back.size() == 2);
        CHECK(back[0].video == "akiyo");
        CHECK(back[0].harq_max == 3);
        CHECK(back[0].modulation == "64qam");
        CHECK(std::isinf(back[0].psnr_mean_db));
        CHECK(back[0].residual_ber == doctest::Approx(1.23457e-5).epsilon(1e-9));
        CHECK(back[0].blocking_mean == doctest::Approx(12345.7).epsilon(1e-9));
        CHECK(back[1].ebno_db == 4.0);
    }

    TEST_CASE("numbers") {
        CHECK(format_number(0.1234567) == "0.123457");
        CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        CHECK(format_number(1e-20) == "1e-20");
    }

    TEST_CASE("file output") {
        const auto dir = scratch("csv");
        CHECK_THROWS_AS(emit_csv({}, dir / "x.csv"), ltevid::ContractError);
        CHECK_THROWS_AS(emit_csv({record("a", 1)}, dir / "missing" / "x.csv"), ltevid::IoError);
        emit_csv({record("a", 1)}, dir / "x.csv", {"c"});
        CHECK(read_csv(dir / "x.csv").size() == 1);
        CHECK_FALSE(fs::exists(dir / "x.csv.tmp"));
    }
}

TEST_SUITE("svg") {
    TEST_CASE("one polyline of eleven vertices per video") {
        std::vector<RunRecord> rs;
        for (const char* v : {"akiyo", "harbor", "rhino"})
            for (int e = 0; e <= 20; e += 2) rs.push_back(record(v, e));
        const auto svg = render_plot(rs, PlotAxis::ebno, "blocking_log10_mean");
        CHECK(count(svg, "<polyline") == 3);
        const std::regex pts("points=\"([^\"]*)\"");
        for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pts); it != std::sregex_iterator(); ++it) {
            const std::string p = (*it)[1];
            CHECK(count(p, ",") == 11);
        }
        CHECK(svg.find("Eb/N0 (dB)") != std::string::npos);
        CHECK(svg.find("http") != std::string::npos);  // namespace only
        CHECK(svg.find("<image") == std::string::npos);
    }

    TEST_CASE("single record is a marker without a polyline") {
        const auto svg = render_plot({record("a", 3)}, PlotAxis::ebno, "blur_mean");
        CHECK(count(svg, "<polyline") == 0);
        CHECK(count(svg, "<circle") == 1);
    }

    TEST_CASE("harq axis ticks sit at 1..4") {
        std::vector<RunRecord> rs;
        for (int h = 1; h <= 4; ++h) rs.push_back(record("harbor", 10, h));
        const auto svg = render_plot(rs, PlotAxis::harq, "blocking_log10_mean");
        const auto ticks = svg.substr(svg.find("class=\"xticks\""), svg.find("class=\"yticks\"") - svg.find("class=\"xticks\""));
        std::vector<std::string> labels;
        const std::regex text(">([^<]+)</text>");
        for (auto it = std::sregex_iterator(ticks.begin(), ticks.end(), text); it != std::sregex_iterator(); ++it)
            labels.push_back((*it)[1]);
        CHECK(labels == std::vector<std::string>{"1", "2", "3", "4"});
    }

    TEST_CASE("mixed series are rejected with the conflicting fields") {
        std::vector<RunRecord> rs{record("a", 0, 1), record("a", 2, 2, "qpsk")};
        try {
            render_plot(rs, PlotAxis::ebno, "blur_mean");
            FAIL("expected GroupingError");
        } catch (const GroupingError& e) {
            CHECK(e.fields() == std::vector<std::string>{"harq_max", "modulation"});
        }
        CHECK_THROWS_AS(render_plot(rs, PlotAxis::ebno, "nonsense"), ltevid::ContractError);
    }

    TEST_CASE("plots are split by the other swept axes") {
        const auto dir = scratch("svg");
        std::vector<RunRecord> rs;
        for (const char* m : {"qpsk", "16qam"})
            for (int e = 0; e <= 4; e += 2) rs.push_back(record("a", e, 4, m));
        const auto files = emit_plots(rs, PlotAxis::ebno, {"blur_mean"}, dir, "fig4");
        REQUIRE(files.size() == 2);
        CHECK(files[0].filename() == "fig4_blur_mean_vs_ebno_qpsk.svg");
        CHECK(files[1].filename() == "fig4_blur_mean_vs_ebno_16qam.svg");
        CHECK(fs::exists(files[0]));
    }
}

TEST_SUITE("cli") {
    TEST_CASE("usage errors exit with 2") {
        std::string err;
        CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
        CHECK(err.find("run") != std::string::npos);
        CHECK(run_cli({}) == 2);
        CHECK(run_cli({"run"}) == 2);
    }

    TEST_CASE("config and I/O errors") {
        const auto dir = scratch("cli_err");
        std::ofstream(dir / "bad.cfg") << "ebno_db = 1\nwat = 2\n[video]\nname=a\nsynthetic=akiyo\n";
        std::string err;
        CHECK(run_cli({"run", (dir / "bad.cfg").string()}, nullptr, &err) == 2);
        CHECK(err.find("line 2") != std::string::npos);
        CHECK(run_cli({"run", (dir / "absent.cfg").string()}) == 3);
        std::ofstream(dir / "novideo.cfg") << "ebno_db = 1\n[video]\nname=a\npath=missing.yuv\n";
        CHECK(run_cli({"run", (dir / "novideo.cfg").string()}) == 3);
    }

    TEST_CASE("run writes a CSV and one SVG per metric") {
        const auto dir = scratch("cli_run");
        std::ofstream(dir / "tiny.cfg") << kTiny;
        std::string out;
        REQUIRE(run_cli({"run", (dir / "tiny.cfg").string(), "--out", (dir / "res").string(), "--dump-video"}, &out) == 0);
        CHECK(fs::exists(dir / "res" / "tiny.csv"));
        CHECK(fs::exists(dir / "res" / "tiny_blocking_log10_mean_vs_ebno.svg"));
        CHECK(fs::exists(dir / "res" / "tiny_blur_mean_vs_ebno.svg"));
        CHECK(fs::exists(dir / "res" / "tiny_received" / "tiny_16qam_h1_eb60.yuv"));
        const auto csv = slurp(dir / "res" / "tiny.csv");
        CHECK(csv.find("# config: ebno_db = 60") != std::string::npos);
        CHECK(csv.find("# metric: blocking.window=256") != std::string::npos);

        // Same seed: byte-identical, also with threads.
        REQUIRE(run_cli({"run", (dir / "tiny.cfg").string(), "--out", (dir / "res2").string(), "--threads", "4"}) == 0);
        CHECK(slurp(dir / "res2" / "tiny.csv") == csv);
        REQUIRE(run_cli({"run", (dir / "tiny.cfg").string(), "--out", (dir / "res3").string(), "--seed", "5"}) == 0);
        CHECK(slurp(dir / "res3" / "tiny.csv").find("# config: seed = 5") != std::string::npos);
    }

    TEST_CASE("metrics on the same file twice") {
        const auto dir = scratch("cli_metrics");
        ltevid::video::write_yuv_file(dir / "a.yuv", ltevid::video::synthesize({"akiyo", 64, 48, 2, 1}));
        std::string out;
        REQUIRE(run_cli({"metrics", (dir / "a.yuv").string(), (dir / "a.yuv").string(), "--width", "64", "--height", "48"},
                        &out) == 0);
        CHECK(out.find("ssim mean=1 median=1") != std::string::npos);
        CHECK(out.find("psnr_db mean=inf median=inf") != std::string::npos);
        CHECK(run_cli({"metrics", (dir / "a.yuv").string(), (dir / "b.yuv").string(), "--width", "64", "--height",
                       "48"}) == 3);
    }

    TEST_CASE("phy-ber prints a table") {
        const auto dir = scratch("cli_phy");
        std::ofstream(dir / "p.cfg") << "ebno_db = 20\nblock_size = 128\nphy_blocks = 5\n";
        std::string out;
        REQUIRE(run_cli({"phy-ber", (dir / "p.cfg").string()}, &out) == 0);
        CHECK(out.find("modulation,harq_max,ebno_db,blocks,blocks_failed,bler,ber\n16qam,1,20,5,0,0,0") !=
              std::string::npos);
    }
}
