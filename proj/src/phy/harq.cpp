#include "ltevid/phy/harq.hpp"

#include <string>

#include "ltevid/errors.hpp"
#include "ltevid/phy/crc.hpp"

namespace ltevid::phy {

HarqProcess::HarqProcess(std::span<const std::uint8_t> info_with_crc, HarqParams params)
    : params_(std::move(params)),
      coded_(turbo_encode(info_with_crc)),
      soft_(info_with_crc.size()),
      estimate_(info_with_crc.size(), 0) {
    if (params_.max_tx < 1 || params_.max_tx > 4)
        throw ContractError("HARQ max_tx must be 1..4, got " + std::to_string(params_.max_tx));
    if (params_.rv_sequence.empty()) throw ContractError("HARQ rv_sequence is empty");
    for (int rv : params_.rv_sequence)
        if (rv < 0 || rv > 3) throw ContractError("HARQ rv_sequence entries must be 0..3");
    if (params_.e == 0) throw ContractError("HARQ transmission length E must be positive");
    if (params_.decoder_iterations < 1) throw ContractError("decoder iterations must be positive");
}

int HarqProcess::next_rv() const {
    const auto n = params_.rv_sequence.size();
    return params_.rv_sequence[static_cast<std::size_t>(tx_count_) % (n < 4 ? n : 4)];
}

Bits HarqProcess::next_transmission() const {
    if (state_ != HarqState::pending) throw ContractError("HARQ process is already finished");
    return rate_match(coded_, next_rv(), params_.e);
}

HarqState HarqProcess::receive(std::span<const float> llrs, TurboDecoder& decoder) {
    if (state_ != HarqState::pending) throw ContractError("HARQ process is already finished");
    if (llrs.size() != params_.e) throw ContractError("HARQ reception length differs from E");
    if (decoder.block_size() != soft_.block_size())
        throw ContractError("HARQ decoder sized for a different block");

    rate_recover(llrs, next_rv(), soft_, soft_.block_size());
    ++tx_count_;

    const StreamLlrs streams = soft_.to_streams();
    EarlyStop stop;
    if (params_.crc_early_stop) stop = [](std::span<const std::uint8_t> bits) { return crc24a_check(bits); };
    auto result = decoder.decode(streams.d0, streams.d1, streams.d2, params_.decoder_iterations, stop);
    estimate_ = std::move(result.bits);

    if (crc24a_check(estimate_))
        state_ = HarqState::ack;
    else if (tx_count_ >= params_.max_tx)
        state_ = HarqState::nack_final;
    return state_;
}

HarqOutcome run_harq(std::span<const std::uint8_t> info_with_crc, const HarqParams& params,
                     const HarqChannel& channel, TurboDecoder* decoder) {
    HarqProcess proc(info_with_crc, params);
    std::optional<TurboDecoder> local;
    if (!decoder || decoder->block_size() != info_with_crc.size()) {
        local.emplace(info_with_crc.size());
        decoder = &*local;
    }
    while (proc.state() == HarqState::pending) {
        const Bits tx = proc.next_transmission();
        const Llrs rx = channel(tx, proc.tx_count());
        proc.receive(rx, *decoder);
    }
    HarqOutcome out;
    if (proc.state() == HarqState::ack) out.ack_at_tx = proc.tx_count();
    out.final_bits = proc.estimate();
    out.residual_errors = count_bit_errors(out.final_bits, info_with_crc);
    out.transmissions = proc.tx_count();
    return out;
}

}  // namespace ltevid::phy
