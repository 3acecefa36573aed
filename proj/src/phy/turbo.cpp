#include "ltevid/phy/turbo.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <tuple>

#include "ltevid/errors.hpp"
#include "ltevid/phy/qpp.hpp"

namespace ltevid::phy {
namespace {

// State bits: s1 (newest) = bit 2, s2 = bit 1, s3 = bit 0.
struct Trellis {
    std::array<std::array<std::uint8_t, 2>, 8> next{};
    std::array<std::array<std::uint8_t, 2>, 8> parity{};
    std::array<std::uint8_t, 8> tail_input{};  // input that drives the feedback to zero

    constexpr Trellis() {
        for (unsigned s = 0; s < 8; ++s) {
            const unsigned s1 = (s >> 2) & 1u, s2 = (s >> 1) & 1u, s3 = s & 1u;
            for (unsigned u = 0; u < 2; ++u) {
                const unsigned a = u ^ s2 ^ s3;
                next[s][u] = static_cast<std::uint8_t>((a << 2) | (s1 << 1) | s2);
                parity[s][u] = static_cast<std::uint8_t>(a ^ s1 ^ s3);
            }
            tail_input[s] = static_cast<std::uint8_t>(s2 ^ s3);
        }
    }
};

constexpr Trellis kTrellis{};

// Gather form of the trellis: the two branches entering each state, with the
// branch metric signs as factors (+1 for a 0 label, -1 for a 1 label).
struct Incoming {
    std::array<std::array<std::uint8_t, 2>, 8> from{};
    std::array<std::array<float, 2>, 8> sys_sign{};
    std::array<std::array<float, 2>, 8> par_sign{};
    // Signs of the outgoing branches, indexed [state][input].
    std::array<std::array<float, 2>, 8> out_par_sign{};

    constexpr Incoming() {
        std::array<unsigned, 8> fill{};
        for (unsigned s = 0; s < 8; ++s)
            for (unsigned u = 0; u < 2; ++u) {
                const unsigned ns = kTrellis.next[s][u];
                const unsigned j = fill[ns]++;
                from[ns][j] = static_cast<std::uint8_t>(s);
                sys_sign[ns][j] = u ? -1.0f : 1.0f;
                par_sign[ns][j] = kTrellis.parity[s][u] ? -1.0f : 1.0f;
                out_par_sign[s][u] = kTrellis.parity[s][u] ? -1.0f : 1.0f;
            }
    }
};

constexpr Incoming kIncoming{};
constexpr float kNegInf = -std::numeric_limits<float>::infinity();

struct ConstituentEncoder {
    unsigned state = 0;

    std::uint8_t step(std::uint8_t u) {
        const std::uint8_t z = kTrellis.parity[state][u];
        state = kTrellis.next[state][u];
        return z;
    }
    // Returns (x, z) for one termination step.
    std::pair<std::uint8_t, std::uint8_t> terminate_step() {
        const std::uint8_t x = kTrellis.tail_input[state];
        return {x, step(x)};
    }
};

}  // namespace

CodedBlock turbo_encode(std::span<const std::uint8_t> info) {
    const std::size_t k = info.size();
    const auto perm = qpp_permutation(k);

    CodedBlock out;
    out.d0.assign(k + 4, 0);
    out.d1.assign(k + 4, 0);
    out.d2.assign(k + 4, 0);

    ConstituentEncoder enc1, enc2;
    for (std::size_t i = 0; i < k; ++i) {
        out.d0[i] = info[i] & 1u;
        out.d1[i] = enc1.step(info[i] & 1u);
        out.d2[i] = enc2.step(info[perm[i]] & 1u);
    }

    std::uint8_t x[3], z[3], xp[3], zp[3];
    for (int t = 0; t < 3; ++t) std::tie(x[t], z[t]) = enc1.terminate_step();
    for (int t = 0; t < 3; ++t) std::tie(xp[t], zp[t]) = enc2.terminate_step();

    out.d0[k] = x[0];   out.d0[k + 1] = z[1];  out.d0[k + 2] = xp[0];  out.d0[k + 3] = zp[1];
    out.d1[k] = z[0];   out.d1[k + 1] = x[2];  out.d1[k + 2] = zp[0];  out.d1[k + 3] = xp[2];
    out.d2[k] = x[1];   out.d2[k + 1] = z[2];  out.d2[k + 2] = xp[1];  out.d2[k + 3] = zp[2];
    return out;
}

TurboDecoder::TurboDecoder(std::size_t block_size)
    : k_(block_size),
      perm_(qpp_permutation(block_size)),
      alpha_((block_size + 4) * 8),
      sys2_(block_size),
      par1_(block_size),
      par2_(block_size),
      apriori_(block_size),
      extrinsic_(block_size) {}

void TurboDecoder::constituent(std::span<const float> sys, std::span<const float> apriori,
                               std::span<const float> parity, const Tail& tail,
                               std::span<float> extrinsic) {
    const std::size_t steps = k_ + 3;
    float* alpha = alpha_.data();

    std::fill(alpha, alpha + 8, kNegInf);
    alpha[0] = 0.0f;

    // Branch metric: +L/2 for a 0 label, -L/2 for a 1 label.
    for (std::size_t t = 0; t < k_; ++t) {
        const float a = 0.5f * (sys[t] + apriori[t]);
        const float p = 0.5f * parity[t];
        const float* cur = alpha + t * 8;
        float* nxt = alpha + (t + 1) * 8;
        for (unsigned ns = 0; ns < 8; ++ns) {
            const auto& from = kIncoming.from[ns];
            const float g0 = kIncoming.sys_sign[ns][0] * a + kIncoming.par_sign[ns][0] * p;
            const float g1 = kIncoming.sys_sign[ns][1] * a + kIncoming.par_sign[ns][1] * p;
            nxt[ns] = std::max(cur[from[0]] + g0, cur[from[1]] + g1);
        }
        const float norm = nxt[0];
        for (unsigned s = 0; s < 8; ++s) nxt[s] -= norm;
    }
    for (std::size_t t = k_; t < steps; ++t) {
        const float a = 0.5f * tail.sys[t - k_];
        const float p = 0.5f * tail.par[t - k_];
        const float* cur = alpha + t * 8;
        float* nxt = alpha + (t + 1) * 8;
        std::fill(nxt, nxt + 8, kNegInf);
        for (unsigned s = 0; s < 8; ++s) {
            const unsigned u = kTrellis.tail_input[s];
            const float g = (u ? -a : a) + (kTrellis.parity[s][u] ? -p : p);
            float& dst = nxt[kTrellis.next[s][u]];
            dst = std::max(dst, cur[s] + g);
        }
    }

    std::array<float, 8> beta;
    beta.fill(kNegInf);
    beta[0] = 0.0f;
    for (std::size_t t = steps; t-- > k_;) {
        const float a = 0.5f * tail.sys[t - k_];
        const float p = 0.5f * tail.par[t - k_];
        std::array<float, 8> prev;
        for (unsigned s = 0; s < 8; ++s) {
            const unsigned u = kTrellis.tail_input[s];
            const float g = (u ? -a : a) + (kTrellis.parity[s][u] ? -p : p);
            prev[s] = g + beta[kTrellis.next[s][u]];
        }
        beta = prev;
    }
    for (std::size_t t = k_; t-- > 0;) {
        const float a = 0.5f * (sys[t] + apriori[t]);
        const float p = 0.5f * parity[t];
        const float* cur = alpha + t * 8;
        float best0 = kNegInf, best1 = kNegInf;
        std::array<float, 8> prev;
        for (unsigned s = 0; s < 8; ++s) {
            const float p0 = kIncoming.out_par_sign[s][0] * p;
            const float p1 = kIncoming.out_par_sign[s][1] * p;
            const float m0 = a + p0 + beta[kTrellis.next[s][0]];
            const float m1 = -a + p1 + beta[kTrellis.next[s][1]];
            best0 = std::max(best0, cur[s] + m0);
            best1 = std::max(best1, cur[s] + m1);
            prev[s] = std::max(m0, m1);
        }
        extrinsic[t] = (best0 - best1) - sys[t] - apriori[t];
        const float norm = prev[0];
        for (unsigned s = 0; s < 8; ++s) beta[s] = prev[s] - norm;
    }
}

TurboDecodeResult TurboDecoder::decode(std::span<const float> systematic,
                                       std::span<const float> parity1,
                                       std::span<const float> parity2, int iterations,
                                       const EarlyStop& stop) {
    const std::size_t n = k_ + 4;
    if (systematic.size() != n || parity1.size() != n || parity2.size() != n)
        throw ContractError("turbo_decode: LLR streams must have length K+4 = " + std::to_string(n));
    if (iterations < 1) throw ContractError("turbo_decode: iterations must be positive");

    const std::size_t k = k_;
    Tail tail1{{systematic[k], parity2[k], parity1[k + 1]}, {parity1[k], systematic[k + 1], parity2[k + 1]}};
    Tail tail2{{systematic[k + 2], parity2[k + 2], parity1[k + 3]},
               {parity1[k + 2], systematic[k + 3], parity2[k + 3]}};

    const std::span<const float> sys1 = systematic.first(k);
    const std::span<const float> p1 = parity1.first(k);
    const std::span<const float> p2 = parity2.first(k);
    for (std::size_t i = 0; i < k; ++i) sys2_[i] = systematic[perm_[i]];

    std::vector<float> ext1(k), ext2(k), apriori1(k, 0.0f);
    TurboDecodeResult result;
    result.bits.assign(k, 0);

    for (int it = 0; it < iterations; ++it) {
        constituent(sys1, apriori1, p1, tail1, ext1);
        for (std::size_t i = 0; i < k; ++i) apriori_[i] = ext1[perm_[i]];
        constituent(sys2_, apriori_, p2, tail2, ext2);
        for (std::size_t i = 0; i < k; ++i) {
            apriori1[perm_[i]] = ext2[i];
            const float app = ext2[i] + sys2_[i] + apriori_[i];
            // Exact ties (no information at all) resolve to 1 so an erased block
            // cannot decode to the all-zero word, whose CRC is zero.
            result.bits[perm_[i]] = app > 0.0f ? 0 : 1;
        }
        result.iterations = it + 1;
        if (stop && stop(result.bits)) {
            result.success_hint = true;
            break;
        }
    }
    return result;
}

TurboDecodeResult turbo_decode(std::span<const float> systematic, std::span<const float> parity1,
                               std::span<const float> parity2, int iterations,
                               const EarlyStop& stop) {
    if (systematic.size() < 4) throw ContractError("turbo_decode: LLR streams too short");
    TurboDecoder dec(systematic.size() - 4);
    return dec.decode(systematic, parity1, parity2, iterations, stop);
}

}  // namespace ltevid::phy
