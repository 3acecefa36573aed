#include "ltevid/airlink/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

#include "ltevid/errors.hpp"

namespace ltevid::airlink {
namespace {

constexpr TapSpec kEpa[] = {{0, 0.0}, {30, -1.0}, {70, -2.0}, {90, -3.0}, {110, -8.0}, {190, -17.2}, {410, -20.8}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

std::string_view fading_name(Fading f) { return f == Fading::static_taps ? "static" : "rayleigh_block"; }

std::optional<Fading> parse_fading(std::string_view text) {
    const auto s = lower(text);
    if (s == "static") return Fading::static_taps;
    if (s == "rayleigh_block" || s == "rayleigh") return Fading::rayleigh_block;
    return std::nullopt;
}

std::span<const TapSpec> epa_taps() { return kEpa; }

ChannelProfile ChannelProfile::from_taps(std::string name, std::span<const TapSpec> taps, double sample_rate,
                                         Fading fading) {
    if (taps.empty()) throw ConfigError("channel profile '" + name + "' has no taps");
    std::map<std::size_t, double> merged;
    for (const auto& t : taps) {
        if (t.delay_ns < 0) throw ConfigError("channel profile '" + name + "': negative tap delay");
        const auto d = static_cast<std::size_t>(std::llround(t.delay_ns * 1e-9 * sample_rate));
        merged[d] += std::pow(10.0, t.power_db / 10.0);
    }
    ChannelProfile p;
    p.name = std::move(name);
    p.fading = fading;
    double total = 0;
    for (const auto& [d, pw] : merged) total += pw;
    for (const auto& [d, pw] : merged) {
        p.delays.push_back(d);
        p.powers.push_back(pw / total);
    }
    return p;
}

ChannelProfile ChannelProfile::preset(std::string_view name, double sample_rate, Fading fading) {
    const auto s = lower(name);
    if (s == "awgn") {
        const TapSpec single[] = {{0, 0.0}};
        return from_taps("awgn", single, sample_rate, fading);
    }
    if (s == "epa") return from_taps("epa", kEpa, sample_rate, fading);
    throw ConfigError("unknown channel profile '" + std::string(name) + "'");
}

void ChannelProfile::check_against(const OfdmConfig& cfg) const {
    if (max_delay() >= cfg.min_cp_length())
        throw ConfigError("channel profile '" + name + "': delay spread of " + std::to_string(max_delay()) +
                          " samples does not fit the " + std::to_string(cfg.min_cp_length()) +
                          "-sample cyclic prefix");
}

ChannelRealization realize(const ChannelProfile& profile, Rng& rng) {
    ChannelRealization ch;
    ch.delays = profile.delays;
    ch.gains.reserve(profile.powers.size());
    std::normal_distribution<double> n(0.0, 1.0);
    for (double p : profile.powers) {
        if (profile.fading == Fading::static_taps) {
            ch.gains.emplace_back(std::sqrt(p), 0.0);
        } else {
            const double s = std::sqrt(p / 2.0);
            const double re = n(rng);
            const double im = n(rng);
            ch.gains.emplace_back(s * re, s * im);
        }
    }
    return ch;
}

std::vector<Complex> frequency_response(const ChannelRealization& ch, const OfdmConfig& cfg) {
    std::vector<Complex> h(cfg.active_subcarriers);
    const double n = static_cast<double>(cfg.fft_size);
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double bin = static_cast<double>(cfg.bin_of(k));
        Complex acc{};
        for (std::size_t t = 0; t < ch.gains.size(); ++t)
            acc += ch.gains[t] * std::polar(1.0, -2.0 * std::numbers::pi * bin * static_cast<double>(ch.delays[t]) / n);
        h[k] = acc;
    }
    return h;
}

double noise_variance(double ebno_db, double code_rate, int bits_per_symbol) {
    if (!(code_rate > 0.0 && code_rate <= 1.0)) throw ContractError("noise_variance: code rate must be in (0, 1]");
    if (bits_per_symbol != 2 && bits_per_symbol != 4 && bits_per_symbol != 6)
        throw ContractError("noise_variance: bits per symbol must be 2, 4 or 6");
    return 1.0 / (code_rate * bits_per_symbol * std::pow(10.0, ebno_db / 10.0));
}

std::vector<Complex> apply_channel(std::span<const Complex> samples, const ChannelRealization& ch,
                                   double noise_var, Rng& rng) {
    std::vector<Complex> out(samples.size());
    for (std::size_t t = 0; t < ch.gains.size(); ++t) {
        const std::size_t d = ch.delays[t];
        const Complex g = ch.gains[t];
        for (std::size_t i = d; i < samples.size(); ++i) out[i] += g * samples[i - d];
    }
    if (noise_var > 0.0) {
        std::normal_distribution<double> n(0.0, std::sqrt(noise_var / 2.0));
        for (auto& x : out) {
            const double re = n(rng);
            const double im = n(rng);
            x += Complex(re, im);
        }
    }
    return out;
}

}  // namespace ltevid::airlink
