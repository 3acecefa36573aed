#pragma once

#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltevid/airlink/constellation.hpp"
#include "ltevid/airlink/ofdm.hpp"

namespace ltevid::airlink {

using Rng = std::mt19937_64;

enum class Fading { static_taps, rayleigh_block };

std::string_view fading_name(Fading f);
std::optional<Fading> parse_fading(std::string_view text);

/// A tap in physical units, as written in configuration files.
struct TapSpec {
    double delay_ns;
    double power_db;
};

/// Extended Pedestrian A delays and relative powers.
std::span<const TapSpec> epa_taps();

/// Tapped delay line on the sample grid. Powers are linear and sum to 1.
struct ChannelProfile {
    std::string name;
    std::vector<std::size_t> delays;  // samples, strictly increasing
    std::vector<double> powers;
    Fading fading = Fading::static_taps;

    /// Rounds delays to samples, merges taps landing on the same sample (powers
    /// add) and normalises the total power to 1.
    static ChannelProfile from_taps(std::string name, std::span<const TapSpec> taps, double sample_rate,
                                    Fading fading);

    /// "awgn" (single tap) or "epa". Throws ConfigError for other names.
    static ChannelProfile preset(std::string_view name, double sample_rate, Fading fading);

    std::size_t max_delay() const { return delays.empty() ? 0 : delays.back(); }

    /// The delay spread must fit inside the shortest cyclic prefix.
    void check_against(const OfdmConfig& cfg) const;
};

/// Tap gains for one transport block.
struct ChannelRealization {
    std::vector<std::size_t> delays;
    std::vector<Complex> gains;
};

/// Static: sqrt(power). Rayleigh block: CN(0, power) per tap.
ChannelRealization realize(const ChannelProfile& profile, Rng& rng);

/// H on each active subcarrier: the DFT of the tap impulse response.
std::vector<Complex> frequency_response(const ChannelRealization& ch, const OfdmConfig& cfg);

/// Complex noise variance N0 per unit-energy symbol: 1 / (R * Qm * Eb/N0).
double noise_variance(double ebno_db, double code_rate, int bits_per_symbol);

/// Convolves with the taps (output truncated to the input length) and adds
/// circular complex Gaussian noise of total variance noise_var (none if 0).
std::vector<Complex> apply_channel(std::span<const Complex> samples, const ChannelRealization& ch,
                                   double noise_var, Rng& rng);

}  // namespace ltevid::airlink
