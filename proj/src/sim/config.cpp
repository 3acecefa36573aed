#include "ltevid/sim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ltevid/airlink/ofdm.hpp"
#include "ltevid/errors.hpp"
#include "ltevid/phy/qpp.hpp"
#include "ltevid/video/synthetic.hpp"

namespace ltevid::sim {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
        throw ConfigError("not a number: '" + std::string(s) + "'");
    return v;
}

long long to_integer(std::string_view s) {
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("not an integer: '" + std::string(s) + "'");
    return v;
}

std::uint64_t to_unsigned(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("not a non-negative integer: '" + std::string(s) + "'");
    return v;
}

std::size_t to_positive(std::string_view s) {
    const auto v = to_unsigned(s);
    if (v == 0) throw ConfigError("must be positive: '" + std::string(trim(s)) + "'");
    return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view s) {
    const auto v = lower(trim(s));
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("not a boolean: '" + std::string(trim(s)) + "'");
}

Rational to_rational(std::string_view s) {
    s = trim(s);
    Rational r;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        r.num = static_cast<long>(to_integer(s.substr(0, slash)));
        r.den = static_cast<long>(to_integer(s.substr(slash + 1)));
    } else {
        // Decimal: keep six digits of precision as a fraction.
        const double v = to_double(s);
        r.den = 1000000;
        r.num = std::lround(v * r.den);
    }
    if (r.den <= 0 || r.num <= 0 || r.num > r.den) throw ConfigError("code rate must be in (0, 1]: '" + std::string(s) + "'");
    const long g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

std::vector<int> to_int_list(std::string_view s) {
    std::vector<int> out;
    for (double v : parse_number_list(s)) {
        if (v != std::floor(v)) throw ConfigError("expected integers: '" + std::string(trim(s)) + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<airlink::TapSpec> to_taps(std::string_view s) {
    std::vector<airlink::TapSpec> taps;
    for (auto item : split(s, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw ConfigError("taps are delay_ns:power_db pairs, got '" + std::string(item) + "'");
        taps.push_back({to_double(item.substr(0, colon)), to_double(item.substr(colon + 1))});
        if (taps.back().delay_ns < 0) throw ConfigError("tap delay must be non-negative");
    }
    return taps;
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
    return out;
}

}  // namespace

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

std::vector<double> parse_number_list(std::string_view text) {
    const auto items = split(text, ',');
    std::vector<double> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i] == "...") {
            if (out.empty() || i + 1 != items.size() - 1)
                throw ConfigError("'...' needs a start before it and exactly one end value after it");
            const double end = to_double(items[i + 1]);
            const double step = out.size() >= 2 ? out[out.size() - 1] - out[out.size() - 2] : 1.0;
            const double from = out.back();
            const double n = (end - from) / step;
            const double steps = std::round(n);
            if (step == 0 || n < 0 || std::abs(n - steps) > 1e-9 * std::max(1.0, std::abs(n)))
                throw ConfigError("'...' run does not reach " + std::string(items[i + 1]) + " in whole steps");
            for (long k = 1; k <= static_cast<long>(steps); ++k) {
                // Snap to a multiple of the step to avoid drift in decimals.
                const double v = from + static_cast<double>(k) * step;
                out.push_back(std::round(v * 1e9) / 1e9);
            }
            return out;
        }
        if (items[i].empty()) throw ConfigError("empty list element");
        out.push_back(to_double(items[i]));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const {
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

std::vector<std::string> ExperimentConfig::describe() const {
    std::vector<std::string> out;
    auto add = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
    add("ebno_db", join(ebno_db, format));
    add("harq_max", join(harq_max, [](int v) { return std::to_string(v); }));
    add("modulation", join(modulations, [](airlink::Modulation m) { return std::string(airlink::modulation_name(m)); }));
    add("code_rate", code_rate.str());
    add("rv_sequence", join(rv_sequence, [](int v) { return std::to_string(v); }));
    add("ofdm", ofdm);
    add("channel", channel);
    if (!channel_taps.empty())
        add("channel_taps", join(channel_taps, [](const airlink::TapSpec& t) { return format(t.delay_ns) + ":" + format(t.power_db); }));
    add("fading", std::string(airlink::fading_name(fading)));
    add("block_size", std::to_string(block_size));
    add("codec", codec.passthrough ? "passthrough" : "dct");
    add("quant_step", format(codec.quant_step));
    add("bits_per_coeff", std::to_string(codec.bits_per_coeff));
    add("coeffs_kept", std::to_string(codec.coeffs_kept));
    add("decoder_iterations", std::to_string(decoder_iterations));
    add("early_stop", early_stop ? "true" : "false");
    add("seed", std::to_string(seed));
    for (const auto& v : videos) {
        std::string src = v.synthetic.empty() ? "path=" + v.path.generic_string() : "synthetic=" + v.synthetic;
        add("video." + v.name, src + " " + std::to_string(v.width) + "x" + std::to_string(v.height) + " frames=" +
                                   std::to_string(v.frames));
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir, bool require_videos) {
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    cfg.ebno_db.clear();

    std::set<std::string> seen_global;
    std::set<std::string> seen_video;
    std::map<std::string, std::size_t> video_names;
    bool in_video = false, have_ebno = false;
    std::size_t video_line = 0;

    auto finish_video = [&]() {
        if (!in_video) return;
        auto& v = cfg.videos.back();
        if (v.name.empty()) throw ConfigError("[video] section needs a name", video_line);
        if (v.path.empty() == v.synthetic.empty())
            throw ConfigError("[video] '" + v.name + "' needs exactly one of path or synthetic", video_line);
        if (v.width % 2 || v.height % 2) throw ConfigError("video dimensions must be even", video_line);
        if (!video_names.emplace(v.name, video_line).second)
            throw ConfigError("duplicate video name '" + v.name + "'", video_line);
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        // A '#' starts a comment at line start or after whitespace.
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (raw[i] == '#' && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
                raw = raw.substr(0, i);
                break;
            }
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[video]") throw ConfigError("unknown section " + std::string(line), lineno);
            finish_video();
            cfg.videos.emplace_back();
            seen_video.clear();
            in_video = true;
            video_line = lineno;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = lower(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key", lineno);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", lineno);

        try {
            if (in_video) {
                if (!seen_video.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
                auto& v = cfg.videos.back();
                if (key == "name") v.name = std::string(value);
                else if (key == "path") v.path = std::filesystem::path(std::string(value));
                else if (key == "synthetic") {
                    v.synthetic = lower(value);
                    const auto& scenes = video::synthetic_scenes();
                    if (std::find(scenes.begin(), scenes.end(), v.synthetic) == scenes.end())
                        throw ConfigError("unknown synthetic scene '" + std::string(value) + "'");
                }
                else if (key == "width") v.width = to_positive(value);
                else if (key == "height") v.height = to_positive(value);
                else if (key == "frames") v.frames = to_positive(value);
                else throw ConfigError("unknown key '" + key + "' in [video]");
                continue;
            }

            if (!seen_global.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
            if (key == "ebno_db") {
                cfg.ebno_db = parse_number_list(value);
                have_ebno = true;
            } else if (key == "harq_max") {
                cfg.harq_max = to_int_list(value);
                for (int h : cfg.harq_max)
                    if (h < 1 || h > 4) throw ConfigError("harq_max values must be in 1..4");
            } else if (key == "modulation") {
                cfg.modulations.clear();
                for (auto item : split(value, ',')) {
                    const auto m = airlink::parse_modulation(item);
                    if (!m) throw ConfigError("unknown modulation '" + std::string(item) + "' (qpsk, 16qam, 64qam)");
                    cfg.modulations.push_back(*m);
                }
            } else if (key == "code_rate") {
                cfg.code_rate = to_rational(value);
            } else if (key == "rv_sequence") {
                cfg.rv_sequence = to_int_list(value);
                if (cfg.rv_sequence.size() > 4) throw ConfigError("rv_sequence has at most 4 entries");
                for (int r : cfg.rv_sequence)
                    if (r < 0 || r > 3) throw ConfigError("redundancy versions are 0..3");
            } else if (key == "ofdm") {
                cfg.ofdm = lower(value);
                (void)airlink::OfdmConfig::preset(cfg.ofdm);
            } else if (key == "channel") {
                cfg.channel = lower(value);
                if (cfg.channel != "awgn" && cfg.channel != "epa")
                    throw ConfigError("unknown channel '" + std::string(value) + "' (awgn, epa)");
            } else if (key == "channel_taps") {
                cfg.channel_taps = to_taps(value);
            } else if (key == "fading") {
                const auto f = airlink::parse_fading(value);
                if (!f) throw ConfigError("unknown fading '" + std::string(value) + "' (static, rayleigh_block)");
                cfg.fading = *f;
            } else if (key == "block_size") {
                cfg.block_size = to_positive(value);
                if (!phy::is_valid_block_size(cfg.block_size))
                    throw ConfigError("block_size " + std::string(value) + " is not a turbo interleaver size");
            } else if (key == "codec") {
                const auto c = lower(value);
                if (c != "dct" && c != "passthrough") throw ConfigError("codec is dct or passthrough");
                cfg.codec.passthrough = c == "passthrough";
            } else if (key == "quant_step") {
                cfg.codec.quant_step = to_double(value);
                if (cfg.codec.quant_step <= 0) throw ConfigError("quant_step must be positive");
            } else if (key == "bits_per_coeff") {
                cfg.codec.bits_per_coeff = static_cast<int>(to_integer(value));
                if (cfg.codec.bits_per_coeff < 2 || cfg.codec.bits_per_coeff > 16)
                    throw ConfigError("bits_per_coeff must be in 2..16");
            } else if (key == "coeffs_kept") {
                cfg.codec.coeffs_kept = static_cast<int>(to_integer(value));
                if (cfg.codec.coeffs_kept < 1 || cfg.codec.coeffs_kept > 64)
                    throw ConfigError("coeffs_kept must be in 1..64");
            } else if (key == "decoder_iterations") {
                cfg.decoder_iterations = static_cast<int>(to_positive(value));
            } else if (key == "early_stop") {
                cfg.early_stop = to_bool(value);
            } else if (key == "seed") {
                cfg.seed = to_unsigned(value);
            } else if (key == "output_dir") {
                cfg.output_dir = std::filesystem::path(std::string(value));
            } else if (key == "threads") {
                cfg.threads = static_cast<unsigned>(to_unsigned(value));
            } else if (key == "phy_blocks") {
                cfg.phy_blocks = to_positive(value);
            } else if (key == "record_wall_time") {
                cfg.record_wall_time = to_bool(value);
            } else if (key == "plot_axis") {
                cfg.plot_axis = lower(value);
                if (cfg.plot_axis != "ebno" && cfg.plot_axis != "harq" && cfg.plot_axis != "modulation")
                    throw ConfigError("plot_axis is ebno, harq or modulation");
            } else if (key == "plot_metrics") {
                cfg.plot_metrics.clear();
                for (auto item : split(value, ',')) cfg.plot_metrics.emplace_back(item);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            if (e.line()) throw;
            throw ConfigError(e.what(), lineno);
        } catch (const ContractError& e) {
            throw ConfigError(e.what(), lineno);
        }
    }
    finish_video();

    if (!have_ebno) throw ConfigError("missing required key 'ebno_db'");
    if (require_videos && cfg.videos.empty()) throw ConfigError("no [video] section");
    if (!cfg.channel_taps.empty()) cfg.channel = "custom";
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file, bool require_videos) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot read config " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), file.parent_path(), require_videos);
}

}  // namespace ltevid::sim
