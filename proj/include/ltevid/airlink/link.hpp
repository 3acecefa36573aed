#pragma once

#include <span>

#include "ltevid/airlink/channel.hpp"
#include "ltevid/airlink/constellation.hpp"
#include "ltevid/airlink/equalizer.hpp"
#include "ltevid/airlink/ofdm.hpp"
#include "ltevid/phy/bits.hpp"

namespace ltevid::airlink {

/// Bits in, LLRs out: map, OFDM, tapped-delay-line channel with AWGN, OFDM
/// demodulation, genie-CSI equalisation and soft demapping.
class AirLink {
public:
    /// noise_var is N0 per unit-energy symbol; 0 gives a noiseless link.
    AirLink(Modulation modulation, OfdmConfig ofdm, ChannelProfile profile, double noise_var);

    Modulation modulation() const noexcept { return modulation_; }
    const OfdmConfig& ofdm() const noexcept { return ofdm_; }
    const ChannelProfile& profile() const noexcept { return profile_; }
    double noise_var() const noexcept { return noise_var_; }

    /// One transmission through the given channel realization. bits are
    /// zero-padded to a whole symbol; the returned LLRs match bits.size().
    phy::Llrs transmit(std::span<const std::uint8_t> bits, const ChannelRealization& channel, Rng& rng) const;

private:
    Modulation modulation_;
    OfdmConfig ofdm_;
    ChannelProfile profile_;
    double noise_var_;
};

}  // namespace ltevid::airlink
