#include "ltevid/airlink/link.hpp"

#include <algorithm>

namespace ltevid::airlink {
namespace {

// Demapper floor for the noiseless case; max-log LLRs scale linearly, so the
// value only sets their magnitude.
constexpr double kMinNoiseVar = 1e-9;

}  // namespace

AirLink::AirLink(Modulation modulation, OfdmConfig ofdm, ChannelProfile profile, double noise_var)
    : modulation_(modulation), ofdm_(std::move(ofdm)), profile_(std::move(profile)), noise_var_(noise_var) {
    ofdm_.validate();
    profile_.check_against(ofdm_);
    if (noise_var_ < 0.0) throw ContractError("AirLink: negative noise variance");
}

phy::Llrs AirLink::transmit(std::span<const std::uint8_t> bits, const ChannelRealization& channel, Rng& rng) const {
    const std::size_t qm = static_cast<std::size_t>(bits_per_symbol(modulation_));
    phy::Bits padded(bits.begin(), bits.end());
    padded.resize((bits.size() + qm - 1) / qm * qm, 0);

    const auto symbols = map_symbols(padded, modulation_);
    const auto grid = map_to_grid(symbols, ofdm_.active_subcarriers);
    const auto tx = ofdm_modulate(grid, ofdm_);
    const auto rx = apply_channel(tx, channel, noise_var_, rng);
    const auto rx_grid = ofdm_demodulate(rx, ofdm_);

    const auto h = frequency_response(channel, ofdm_);
    const auto eq = equalize_with_erasures(rx_grid, h, std::max(noise_var_, kMinNoiseVar));

    const std::size_t nsc = ofdm_.active_subcarriers;
    std::vector<double> nv(symbols.size());
    for (std::size_t s = 0; s < symbols.size(); ++s) nv[s] = eq.noise_var[s % nsc];
    auto llr = demap_llr(eq.grid.flat().first(symbols.size()), modulation_, nv);
    llr.resize(bits.size());
    return llr;
}

}  // namespace ltevid::airlink
