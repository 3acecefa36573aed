#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ltevid/phy/bits.hpp"
#include "ltevid/phy/rate_matching.hpp"
#include "ltevid/phy/turbo.hpp"

namespace ltevid::phy {

enum class HarqState { pending, ack, nack_final };

struct HarqParams {
    std::size_t e = 0;                       // bits per transmission
    std::vector<int> rv_sequence{0, 2, 3, 1};
    int max_tx = 1;                          // 1..4
    int decoder_iterations = 8;
    bool crc_early_stop = true;              // end decoding as soon as the CRC passes
};

/// Maps the rate-matched bits of transmission tx_index (0-based) to received LLRs.
using HarqChannel = std::function<Llrs(std::span<const std::uint8_t> bits, int tx_index)>;

struct HarqOutcome {
    std::optional<int> ack_at_tx;  // 1-based
    Bits final_bits;               // last decode, CRC included
    std::size_t residual_errors = 0;
    int transmissions = 0;
};

/// One IR-HARQ process: owns the coded block and the soft buffer for a
/// single CRC-protected transport block.
class HarqProcess {
public:
    HarqProcess(std::span<const std::uint8_t> info_with_crc, HarqParams params);

    HarqState state() const noexcept { return state_; }
    int tx_count() const noexcept { return tx_count_; }
    int max_tx() const noexcept { return params_.max_tx; }
    const HarqParams& params() const noexcept { return params_; }
    const SoftBuffer& soft_buffer() const noexcept { return soft_; }
    const Bits& estimate() const noexcept { return estimate_; }

    /// Redundancy version of the next transmission.
    int next_rv() const;

    /// Rate-matched bits for the next transmission. Only valid while pending.
    Bits next_transmission() const;

    /// Combines one reception, decodes and updates the state.
    HarqState receive(std::span<const float> llrs, TurboDecoder& decoder);

private:
    HarqParams params_;
    CodedBlock coded_;
    SoftBuffer soft_;
    Bits estimate_;
    int tx_count_ = 0;
    HarqState state_ = HarqState::pending;
};

/// Runs a full HARQ exchange for info_with_crc over channel. When decoder is
/// null a local one is created.
HarqOutcome run_harq(std::span<const std::uint8_t> info_with_crc, const HarqParams& params,
                     const HarqChannel& channel, TurboDecoder* decoder = nullptr);

}  // namespace ltevid::phy
