#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ltevid/phy/bits.hpp"

namespace ltevid::phy {

/// Rate-1/3 turbo output: systematic, parity-1 and parity-2 streams, each K+4
/// long with the 12 termination bits spread over the last four positions.
struct CodedBlock {
    Bits d0;
    Bits d1;
    Bits d2;

    std::size_t block_size() const noexcept { return d0.size() - 4; }
    std::size_t stream_length() const noexcept { return d0.size(); }
};

/// PCCC with two 8-state constituent encoders (feedback 1+D^2+D^3,
/// feedforward 1+D+D^3) joined by the QPP interleaver.
/// Throws UnsupportedSizeError when info.size() is not a valid block size.
CodedBlock turbo_encode(std::span<const std::uint8_t> info);

/// Called with the hard decisions after each full iteration; returning true ends decoding.
using EarlyStop = std::function<bool(std::span<const std::uint8_t>)>;

struct TurboDecodeResult {
    Bits bits;
    bool success_hint = false;  // early stop predicate fired
    int iterations = 0;
};

/// Iterative max-log-MAP decoder. Holds the interleaver and work buffers for one
/// block size, so a single instance should not be shared between threads.
class TurboDecoder {
public:
    explicit TurboDecoder(std::size_t block_size);

    std::size_t block_size() const noexcept { return k_; }

    /// All three LLR streams must be K+4 long (ContractError otherwise).
    TurboDecodeResult decode(std::span<const float> systematic, std::span<const float> parity1,
                             std::span<const float> parity2, int iterations,
                             const EarlyStop& stop = {});

private:
    struct Tail {
        float sys[3];
        float par[3];
    };

    void constituent(std::span<const float> sys, std::span<const float> apriori,
                     std::span<const float> parity, const Tail& tail, std::span<float> extrinsic);

    std::size_t k_;
    std::vector<std::uint32_t> perm_;
    std::vector<float> alpha_;
    std::vector<float> sys2_, par1_, par2_, apriori_, extrinsic_;
};

TurboDecodeResult turbo_decode(std::span<const float> systematic, std::span<const float> parity1,
                               std::span<const float> parity2, int iterations,
                               const EarlyStop& stop = {});

}  // namespace ltevid::phy
