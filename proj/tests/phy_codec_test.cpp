#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ltevid/errors.hpp"
#include "ltevid/phy/crc.hpp"
#include "ltevid/phy/harq.hpp"
#include "ltevid/phy/qpp.hpp"
#include "ltevid/phy/rate_matching.hpp"
#include "ltevid/phy/turbo.hpp"
#include "test_util.hpp"

using namespace ltevid::phy;

namespace {

// Polynomial long division over GF(2), the textbook way: append 24 zeros and
// XOR the 25-bit generator wherever the leading bit is set.
std::uint32_t crc_long_division(const Bits& message) {
    Bits r = message;
    r.resize(message.size() + 24, 0);
    Bits gen(25);
    gen[0] = 1;
    for (int i = 0; i < 24; ++i) gen[1 + i] = (0x864CFB >> (23 - i)) & 1u;
    for (std::size_t i = 0; i < message.size(); ++i)
        if (r[i])
            for (std::size_t j = 0; j < 25; ++j) r[i + j] ^= gen[j];
    std::uint32_t v = 0;
    for (std::size_t i = message.size(); i < r.size(); ++i) v = (v << 1) | r[i];
    return v;
}

// Explicit sub-block matrices and circular buffer, walked position by position.
struct OracleBuffer {
    std::vector<std::optional<std::pair<int, std::size_t>>> w;  // (stream, index) or NULL
    std::size_t rows = 0;
};

OracleBuffer oracle_buffer(std::size_t d) {
    const std::size_t cols = 32;
    const std::size_t rows = (d + cols - 1) / cols;
    const std::size_t nd = rows * cols - d;
    const int perm[32] = {0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
                          1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31};
    using Cell = std::optional<std::pair<int, std::size_t>>;
    std::vector<std::vector<Cell>> v(3);
    for (int s = 0; s < 2; ++s) {
        std::vector<std::vector<Cell>> matrix(rows, std::vector<Cell>(cols));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t idx = r * cols + c;
                if (idx >= nd) matrix[r][c] = std::make_pair(s, idx - nd);
            }
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t r = 0; r < rows; ++r) v[s].push_back(matrix[r][perm[c]]);
    }
    // Third stream: pi(k) = (P[k / R] + 32 (k mod R) + 1) mod KPi over the padded row-major y.
    const std::size_t kpi = rows * cols;
    for (std::size_t k = 0; k < kpi; ++k) {
        const std::size_t j = (perm[k / rows] + cols * (k % rows) + 1) % kpi;
        v[2].push_back(j < nd ? Cell{} : Cell{std::make_pair(2, j - nd)});
    }
    OracleBuffer out;
    out.rows = rows;
    for (std::size_t k = 0; k < kpi; ++k) out.w.push_back(v[0][k]);
    for (std::size_t k = 0; k < kpi; ++k) {
        out.w.push_back(v[1][k]);
        out.w.push_back(v[2][k]);
    }
    return out;
}

std::vector<std::size_t> oracle_walk(const OracleBuffer& buf, int rv, std::size_t e) {
    const std::size_t ncb = buf.w.size();
    const std::size_t r = buf.rows;
    const std::size_t k0 = r * (2 * static_cast<std::size_t>(std::ceil(double(ncb) / (8.0 * r))) * rv + 2);
    std::vector<std::size_t> out;
    for (std::size_t j = 0; out.size() < e; ++j) {
        const std::size_t p = (k0 + j) % ncb;
        if (buf.w[p]) out.push_back(p);
    }
    return out;
}

std::vector<float> noiseless_llrs(const Bits& bits, float a = 100.0f) {
    std::vector<float> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? -a : a;
    return out;
}

const Bits& stream(const CodedBlock& c, int s) { return s == 0 ? c.d0 : s == 1 ? c.d1 : c.d2; }

}  // namespace

TEST_SUITE("crc24a") {
    TEST_CASE("zero payload gives zero parity") {
        const Bits zeros(40, 0);
        const Bits framed = crc24a_attach(zeros);
        CHECK(framed.size() == 64);
        CHECK(std::all_of(framed.begin(), framed.end(), [](auto b) { return b == 0; }));
    }

    TEST_CASE("check value of ASCII 123456789 matches long division") {
        const Bits msg = bytes_to_bits("123456789");
        const std::uint32_t oracle = crc_long_division(msg);
        CHECK(oracle == 0xCDE703u);
        CHECK(crc24a(msg) == oracle);
    }

    TEST_CASE("attach then check, random payloads against the oracle") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 200; ++t) {
            const Bits p = testutil::random_bits(1 + rng() % 300, rng);
            const Bits f = crc24a_attach(p);
            REQUIRE(f.size() == p.size() + 24);
            CHECK(crc24a_check(f));
            CHECK(crc24a(p) == crc_long_division(p));
        }
    }

    TEST_CASE("every error pattern of weight 1..3 on a K=40 frame is detected") {
        std::mt19937_64 rng(5);
        const Bits f = crc24a_attach(testutil::random_bits(40, rng));
        const std::size_t n = f.size();
        std::size_t undetected = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Bits g = f;
            g[i] ^= 1;
            undetected += crc24a_check(g);
            for (std::size_t j = i + 1; j < n; ++j) {
                Bits h = g;
                h[j] ^= 1;
                undetected += crc24a_check(h);
                for (std::size_t k = j + 1; k < n; ++k) {
                    h[k] ^= 1;
                    undetected += crc24a_check(h);
                    h[k] ^= 1;
                }
            }
        }
        CHECK(undetected == 0);
    }

    TEST_CASE("short frames are rejected") {
        CHECK_THROWS_AS(crc24a_check(Bits(24, 0)), ltevid::ContractError);
        CHECK_THROWS_AS(crc24a_attach(Bits{}), ltevid::ContractError);
    }
}

TEST_SUITE("qpp") {
    TEST_CASE("table shape") {
        const auto t = qpp_table();
        REQUIRE(t.size() == 188);
        CHECK(t.front().k == 40);
        CHECK(t.back().k == 6144);
        CHECK(t.back().f1 == 263);
        CHECK(t.back().f2 == 480);
        for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].k > t[i - 1].k);
    }

    TEST_CASE("known values") {
        CHECK(qpp_permutation(40)[1] == (3 * 1 + 10 * 1) % 40);
        CHECK(qpp_permutation(40)[1] == 13);
        for (const auto& c : qpp_table()) CHECK(qpp_permutation(c.k)[0] == 0);
    }

    TEST_CASE("every table size is a bijection") {
        for (const auto& c : qpp_table()) {
            auto p = qpp_permutation(c.k);
            std::sort(p.begin(), p.end());
            bool ok = true;
            for (std::uint32_t i = 0; i < p.size(); ++i) ok = ok && p[i] == i;
            CHECK_MESSAGE(ok, "K=" << c.k);
        }
    }

    TEST_CASE("unsupported sizes") {
        CHECK_THROWS_AS(qpp_permutation(41), ltevid::UnsupportedSizeError);
        CHECK_THROWS_AS(qpp_permutation(6208), ltevid::UnsupportedSizeError);
        CHECK(next_valid_block_size(41) == 48);
        CHECK(next_valid_block_size(513) == 528);
        CHECK(next_valid_block_size(6144) == 6144);
        CHECK_THROWS_AS(next_valid_block_size(6145), ltevid::UnsupportedSizeError);
    }
}

TEST_SUITE("turbo") {
    TEST_CASE("all-zero input encodes to all-zero streams") {
        for (std::size_t k : {40u, 1024u, 6144u}) {
            const auto c = turbo_encode(Bits(k, 0));
            CHECK(c.d0.size() == k + 4);
            CHECK(c.d1.size() == k + 4);
            CHECK(c.d2.size() == k + 4);
            for (int s = 0; s < 3; ++s)
                CHECK(std::all_of(stream(c, s).begin(), stream(c, s).end(), [](auto b) { return b == 0; }));
        }
    }

    TEST_CASE("impulse response of the constituent encoders, K=40") {
        // Shift-register simulation of 1/(1+D^2+D^3) * (1+D+D^3) driven by a unit impulse.
        const std::string expected = "1111001011100101110010111001011100101110";
        Bits info(40, 0);
        info[0] = 1;
        const auto c = turbo_encode(info);
        for (std::size_t i = 0; i < 40; ++i) {
            CHECK(c.d0[i] == (i == 0));
            CHECK(c.d1[i] == expected[i] - '0');
            CHECK(c.d2[i] == expected[i] - '0');  // Pi(0) = 0 feeds the same impulse to encoder 2
        }
    }

    TEST_CASE("systematic stream carries the input") {
        std::mt19937_64 rng(3);
        for (std::size_t k : {40u, 512u, 6144u}) {
            const Bits info = testutil::random_bits(k, rng);
            const auto c = turbo_encode(info);
            CHECK(std::equal(info.begin(), info.end(), c.d0.begin()));
        }
    }

    TEST_CASE("noiseless LLRs decode in one iteration") {
        std::mt19937_64 rng(9);
        for (std::size_t k : {40u, 256u, 1024u, 6144u}) {
            const Bits info = testutil::random_bits(k, rng);
            const auto c = turbo_encode(info);
            const auto r = turbo_decode(noiseless_llrs(c.d0), noiseless_llrs(c.d1), noiseless_llrs(c.d2), 1);
            CHECK(r.iterations == 1);
            CHECK(r.bits == info);
        }
    }

    TEST_CASE("total erasure fails the CRC") {
        std::mt19937_64 rng(2);
        const Bits info = crc24a_attach(testutil::random_bits(40 - 24, rng));
        const std::vector<float> zeros(44, 0.0f);
        const auto r = turbo_decode(zeros, zeros, zeros, 8);
        CHECK(r.bits.size() == 40);
        CHECK_FALSE(crc24a_check(r.bits));
    }

    TEST_CASE("length mismatch is a contract error") {
        const std::vector<float> a(44), b(43);
        CHECK_THROWS_AS(turbo_decode(a, b, a, 1), ltevid::ContractError);
    }

    TEST_CASE("K=40 at Eb/N0 4 dB stays below 1e-2 block errors") {
        std::mt19937_64 rng(2024);
        const std::size_t k = 40;
        const double sigma2 = testutil::bpsk_sigma2(4.0, double(k) / double(3 * k + 12));
        TurboDecoder dec(k);
        int errors = 0;
        for (int t = 0; t < 1000; ++t) {
            const Bits info = testutil::random_bits(k, rng);
            const auto c = turbo_encode(info);
            const auto r = dec.decode(testutil::bpsk_awgn_llrs(c.d0, sigma2, rng),
                                      testutil::bpsk_awgn_llrs(c.d1, sigma2, rng),
                                      testutil::bpsk_awgn_llrs(c.d2, sigma2, rng), 8);
            errors += r.bits != info;
        }
        MESSAGE("K=40 BLER at 4 dB: " << errors / 1000.0);
        CHECK(errors < 10);
    }

    TEST_CASE("block error rate does not rise with SNR") {
        std::mt19937_64 rng(77);
        const std::size_t k = 40;
        const double rate = double(k) / double(3 * k + 12);
        TurboDecoder dec(k);
        std::vector<int> errs;
        for (double ebno : {0.0, 2.0, 4.0, 6.0}) {
            const double sigma2 = testutil::bpsk_sigma2(ebno, rate);
            int e = 0;
            for (int t = 0; t < 500; ++t) {
                const Bits info = testutil::random_bits(k, rng);
                const auto c = turbo_encode(info);
                e += dec.decode(testutil::bpsk_awgn_llrs(c.d0, sigma2, rng),
                                testutil::bpsk_awgn_llrs(c.d1, sigma2, rng),
                                testutil::bpsk_awgn_llrs(c.d2, sigma2, rng), 8)
                         .bits != info;
            }
            errs.push_back(e);
        }
        MESSAGE("block errors at 0/2/4/6 dB: " << errs[0] << " " << errs[1] << " " << errs[2] << " " << errs[3]);
        CHECK(errs[1] <= errs[0]);
        CHECK(errs[2] <= errs[1]);
        CHECK(errs[3] <= errs[2]);
        CHECK(errs[1] < errs[0]);
    }

    TEST_CASE("error statistics do not depend on the transmitted codeword") {
        // Same noise realization mirrored onto a random codeword: the decoder is
        // sign-symmetric, so the error patterns coincide.
        std::mt19937_64 rng(31);
        const std::size_t k = 40;
        const double sigma2 = testutil::bpsk_sigma2(1.0, double(k) / double(3 * k + 12));
        TurboDecoder dec(k);
        const Bits info = testutil::random_bits(k, rng);
        const auto c = turbo_encode(info);
        const auto z = turbo_encode(Bits(k, 0));
        int zero_errors = 0, word_errors = 0;
        for (int t = 0; t < 300; ++t) {
            auto l0 = testutil::bpsk_awgn_llrs(z.d0, sigma2, rng);
            auto l1 = testutil::bpsk_awgn_llrs(z.d1, sigma2, rng);
            auto l2 = testutil::bpsk_awgn_llrs(z.d2, sigma2, rng);
            const auto rz = dec.decode(l0, l1, l2, 8);
            for (std::size_t i = 0; i < k + 4; ++i) {
                if (c.d0[i]) l0[i] = -l0[i];
                if (c.d1[i]) l1[i] = -l1[i];
                if (c.d2[i]) l2[i] = -l2[i];
            }
            const auto rc = dec.decode(l0, l1, l2, 8);
            zero_errors += static_cast<int>(count_bit_errors(rz.bits, Bits(k, 0)));
            word_errors += static_cast<int>(count_bit_errors(rc.bits, info));
        }
        MESSAGE("bit errors zero word / random word: " << zero_errors << " / " << word_errors);
        CHECK(zero_errors == doctest::Approx(word_errors).epsilon(0.02));
    }
}

TEST_SUITE("subblock interleaver") {
    TEST_CASE("exact fill has no NULLs") {
        std::mt19937_64 rng(1);
        const Bits s = testutil::random_bits(64, rng);
        const Bits v = subblock_interleave(s, 0);
        CHECK(v.size() == 64);
        CHECK(std::count(v.begin(), v.end(), kNullBit) == 0);
    }

    TEST_CASE("K+4 = 44 pads 20 NULLs in the first row") {
        std::mt19937_64 rng(1);
        const Bits s = testutil::random_bits(44, rng);
        for (int idx : {0, 1}) {
            const Bits v = subblock_interleave(s, idx);
            CHECK(v.size() == 64);
            CHECK(std::count(v.begin(), v.end(), kNullBit) == 20);
            for (std::size_t k = 0; k < v.size(); ++k)
                if (v[k] == kNullBit) CHECK(k % 2 == 0);  // row 0 of every 2-row column
        }
        const Bits v2 = subblock_interleave(s, 2);
        CHECK(std::count(v2.begin(), v2.end(), kNullBit) == 20);
    }

    TEST_CASE("non-NULL output is a permutation of the input") {
        std::mt19937_64 rng(4);
        for (std::size_t d : {44u, 64u, 132u, 6148u})
            for (int idx = 0; idx < 3; ++idx) {
                const Bits s = testutil::random_bits(d, rng);
                Bits v = subblock_interleave(s, idx);
                v.erase(std::remove(v.begin(), v.end(), kNullBit), v.end());
                REQUIRE(v.size() == d);
                CHECK(std::count(v.begin(), v.end(), 1) == std::count(s.begin(), s.end(), 1));
            }
    }
}

TEST_SUITE("rate matching") {
    TEST_CASE("layout agrees with the explicit oracle buffer") {
        for (std::size_t k : {40u, 512u, 6144u}) {
            const auto layout = circular_buffer_layout(k + 4);
            const auto oracle = oracle_buffer(k + 4);
            REQUIRE(layout->size() == oracle.w.size());
            bool same = true;
            for (std::size_t p = 0; p < oracle.w.size(); ++p) {
                if (!oracle.w[p]) {
                    same = same && layout->is_null(p);
                } else {
                    same = same && !layout->is_null(p) && layout->stream_of(p) == oracle.w[p]->first &&
                           layout->index_of(p) == oracle.w[p]->second;
                }
            }
            CHECK_MESSAGE(same, "K=" << k);
        }
    }

    TEST_CASE("full-buffer read emits every coded bit once, double read twice") {
        std::mt19937_64 rng(8);
        const std::size_t k = 40;
        const auto coded = turbo_encode(testutil::random_bits(k, rng));
        const auto layout = circular_buffer_layout(k + 4);
        const std::size_t n = layout->non_null_count();
        for (int reps : {1, 2}) {
            const auto sel = layout->selection(0, reps * n);
            std::map<std::uint32_t, int> hits;
            for (auto p : sel) ++hits[p];
            CHECK(hits.size() == n);
            for (auto& [p, h] : hits) CHECK(h == reps);
            const Bits out = rate_match(coded, 0, reps * n);
            CHECK(std::count(out.begin(), out.end(), 1) ==
                  reps * (std::count(coded.d0.begin(), coded.d0.end(), 1) +
                          std::count(coded.d1.begin(), coded.d1.end(), 1) +
                          std::count(coded.d2.begin(), coded.d2.end(), 1)));
        }
    }

    TEST_CASE("K=40, E=60, each rv matches the brute-force walk") {
        std::mt19937_64 rng(12);
        const std::size_t k = 40;
        const auto coded = turbo_encode(testutil::random_bits(k, rng));
        const auto oracle = oracle_buffer(k + 4);
        for (int rv = 0; rv < 4; ++rv) {
            const auto walk = oracle_walk(oracle, rv, 60);
            const Bits out = rate_match(coded, rv, 60);
            REQUIRE(out.size() == 60);
            for (std::size_t j = 0; j < 60; ++j) {
                const auto [s, i] = *oracle.w[walk[j]];
                CHECK(out[j] == stream(coded, s)[i]);
            }
        }
    }

    TEST_CASE("circular buffer flags NULLs and holds every coded bit") {
        std::mt19937_64 rng(13);
        const auto coded = turbo_encode(testutil::random_bits(40, rng));
        const auto buf = build_circular_buffer(coded);
        CHECK(buf.w.size() == 3 * 64);
        CHECK(std::count(buf.null_mask.begin(), buf.null_mask.end(), true) == 3 * 64 - 3 * 44);
        for (std::size_t p = 0; p < buf.w.size(); ++p) CHECK((buf.w[p] == kNullBit) == buf.null_mask[p]);
        std::ostringstream dump;
        dump_circular_buffer(dump, buf);
        const std::string text = dump.str();
        CHECK(std::count(text.begin(), text.end(), '\n') == 192);
    }

    TEST_CASE("rate_recover places, doubles and unions like the oracle") {
        const std::size_t k = 40;
        const auto oracle = oracle_buffer(k + 4);
        std::mt19937_64 rng(14);
        std::vector<float> rx(60);
        for (auto& x : rx) x = static_cast<float>(std::normal_distribution<double>(0, 3)(rng));

        SoftBuffer once(k);
        rate_recover(rx, 0, once);
        const auto walk0 = oracle_walk(oracle, 0, 60);
        std::vector<float> expected(oracle.w.size(), 0.0f);
        for (std::size_t j = 0; j < 60; ++j) expected[walk0[j]] += rx[j];
        for (std::size_t p = 0; p < expected.size(); ++p) CHECK(once.llr()[p] == expected[p]);

        SoftBuffer twice(k);
        rate_recover(rx, 0, twice);
        rate_recover(rx, 0, twice);
        for (std::size_t p = 0; p < expected.size(); ++p) CHECK(twice.llr()[p] == doctest::Approx(2 * expected[p]));

        SoftBuffer ir(k);
        rate_recover(rx, 0, ir);
        rate_recover(rx, 2, ir);
        const auto walk2 = oracle_walk(oracle, 2, 60);
        for (std::size_t j = 0; j < 60; ++j) expected[walk2[j]] += rx[j];
        std::set<std::size_t> visited(walk0.begin(), walk0.end());
        visited.insert(walk2.begin(), walk2.end());
        for (std::size_t p = 0; p < expected.size(); ++p) {
            CHECK(ir.llr()[p] == doctest::Approx(expected[p]));
            CHECK((ir.fill_count()[p] > 0) == (visited.count(p) > 0));
        }
    }

    TEST_CASE("rate_recover rejects a buffer for another block size") {
        SoftBuffer buf(40);
        std::vector<float> rx(60, 1.0f);
        CHECK_THROWS_AS(rate_recover(rx, 0, buf, 48), ltevid::ContractError);
        CHECK_THROWS_AS(rate_recover(rx, 4, buf), ltevid::ContractError);
    }

    TEST_CASE("rate_recover is the adjoint of rate_match") {
        std::mt19937_64 rng(15);
        for (std::size_t k : {40u, 1008u}) {
            const auto layout = circular_buffer_layout(k + 4);
            for (int rv = 0; rv < 4; ++rv) {
                const std::size_t e = 2 * k + 17;
                const auto sel = layout->selection(rv, e);
                for (int trial = 0; trial < 20; ++trial) {
                    const std::size_t j = rng() % e;
                    std::vector<float> one_hot(e, 0.0f);
                    one_hot[j] = 1.0f;
                    SoftBuffer buf(k);
                    rate_recover(one_hot, rv, buf);
                    std::size_t nonzero = 0;
                    for (std::size_t p = 0; p < buf.llr().size(); ++p) nonzero += buf.llr()[p] != 0.0f;
                    CHECK(nonzero == 1);
                    CHECK(buf.llr()[sel[j]] == 1.0f);
                }
            }
        }
    }

    TEST_CASE("incremental redundancy covers more of the buffer than repetition") {
        for (const auto& c : qpp_table()) {
            const auto layout = circular_buffer_layout(c.k + 4);
            const std::size_t e = layout->size() / 4;
            std::set<std::uint32_t> ir, chase;
            for (int rv : {0, 2, 3, 1})
                for (auto p : layout->selection(rv, e)) ir.insert(p);
            for (int t = 0; t < 4; ++t)
                for (auto p : layout->selection(0, e)) chase.insert(p);
            CHECK_MESSAGE(ir.size() > chase.size(), "K=" << c.k);
        }
    }

    TEST_CASE("noiseless round trip for every block size") {
        std::mt19937_64 rng(16);
        for (const auto& c : qpp_table()) {
            const Bits info = testutil::random_bits(c.k, rng);
            const auto coded = turbo_encode(info);
            const std::size_t e = 3 * (c.k + 4);
            SoftBuffer buf(c.k);
            rate_recover(noiseless_llrs(rate_match(coded, 0, e)), 0, buf);
            const auto s = buf.to_streams();
            CHECK_MESSAGE(turbo_decode(s.d0, s.d1, s.d2, 1).bits == info, "K=" << c.k);
        }
    }
}

TEST_SUITE("harq") {
    HarqChannel noiseless_channel() {
        return [](std::span<const std::uint8_t> bits, int) {
            return noiseless_llrs(Bits(bits.begin(), bits.end()));
        };
    }

    TEST_CASE("noiseless channel acknowledges the first transmission") {
        std::mt19937_64 rng(20);
        const Bits info = crc24a_attach(testutil::random_bits(1024 - 24, rng));
        HarqParams p;
        p.e = 1536;
        p.max_tx = 1;
        const auto out = run_harq(info, p, noiseless_channel());
        REQUIRE(out.ack_at_tx.has_value());
        CHECK(*out.ack_at_tx == 1);
        CHECK(out.residual_errors == 0);
        CHECK(out.final_bits == info);
    }

    TEST_CASE("erasure channel never acknowledges") {
        std::mt19937_64 rng(21);
        const Bits info = crc24a_attach(testutil::random_bits(512 - 24, rng));
        HarqParams p;
        p.e = 768;
        p.max_tx = 4;
        int calls = 0;
        const auto out = run_harq(info, p, [&](std::span<const std::uint8_t> bits, int tx) {
            CHECK(tx == calls++);
            return Llrs(bits.size(), 0.0f);
        });
        CHECK_FALSE(out.ack_at_tx.has_value());
        CHECK(out.transmissions == 4);
        CHECK(out.residual_errors > 0);
    }

    TEST_CASE("process state machine") {
        std::mt19937_64 rng(22);
        const Bits info = crc24a_attach(testutil::random_bits(40 - 24, rng));
        HarqParams p;
        p.e = 30;
        p.max_tx = 2;
        p.rv_sequence = {0, 1, 2, 3};
        HarqProcess proc(info, p);
        TurboDecoder dec(40);
        CHECK(proc.state() == HarqState::pending);
        CHECK(proc.next_rv() == 0);
        proc.receive(Llrs(30, 0.0f), dec);
        CHECK(proc.tx_count() == 1);
        CHECK(proc.next_rv() == 1);
        CHECK(proc.state() == HarqState::pending);
        proc.receive(Llrs(30, 0.0f), dec);
        CHECK(proc.state() == HarqState::nack_final);
        CHECK_THROWS_AS(proc.next_transmission(), ltevid::ContractError);

        HarqParams bad = p;
        bad.max_tx = 5;
        CHECK_THROWS_AS(HarqProcess(info, bad), ltevid::ContractError);
    }

    // ACK counts for max_tx = 1..4 with the same noise (and fade) per block.
    std::array<int, 4> ack_counts(double ebno_db, bool block_fading, int trials) {
        std::mt19937_64 rng(23);
        const std::size_t k = 104;
        const std::size_t e = 156;  // rate ~2/3 per transmission
        const double sigma2 = testutil::bpsk_sigma2(ebno_db, double(k) / double(e));
        TurboDecoder dec(k);
        std::array<int, 4> acks{};
        for (int t = 0; t < trials; ++t) {
            const Bits info = crc24a_attach(testutil::random_bits(k - 24, rng));
            const std::uint64_t seed = rng();
            for (int max_tx = 1; max_tx <= 4; ++max_tx) {
                std::mt19937_64 noise(seed);
                const double h = block_fading ? std::sqrt(std::exponential_distribution<double>(1.0)(noise)) : 1.0;
                HarqParams p;
                p.e = e;
                p.max_tx = max_tx;
                const auto out = run_harq(
                    info, p,
                    [&](std::span<const std::uint8_t> bits, int) {
                        std::normal_distribution<double> n(0.0, std::sqrt(sigma2));
                        Llrs llr(bits.size());
                        for (std::size_t i = 0; i < bits.size(); ++i) {
                            const double y = h * (bits[i] ? -1.0 : 1.0) + n(noise);
                            llr[i] = static_cast<float>(2.0 * h * y / sigma2);
                        }
                        return llr;
                    },
                    &dec);
                acks[max_tx - 1] += out.ack_at_tx.has_value();
            }
        }
        return acks;
    }

    TEST_CASE("retransmissions raise the ACK rate under AWGN") {
        // Over pure AWGN a second transmission already rescues every block, so
        // only the first step can be strict.
        const auto acks = ack_counts(1.5, false, 500);
        MESSAGE("AWGN ACKs for max_tx 1..4: " << acks[0] << " " << acks[1] << " " << acks[2] << " " << acks[3]);
        const double bler1 = 1.0 - acks[0] / 500.0;
        CHECK(bler1 > 0.3);
        CHECK(bler1 < 0.9);
        CHECK(acks[0] < acks[1]);
        CHECK(acks[1] <= acks[2]);
        CHECK(acks[2] <= acks[3]);
    }

    TEST_CASE("retransmissions raise the ACK rate under block fading") {
        const auto acks = ack_counts(4.0, true, 500);
        MESSAGE("fading ACKs for max_tx 1..4: " << acks[0] << " " << acks[1] << " " << acks[2] << " " << acks[3]);
        const double bler1 = 1.0 - acks[0] / 500.0;
        CHECK(bler1 > 0.3);
        CHECK(bler1 < 0.9);
        CHECK(acks[0] < acks[1]);
        CHECK(acks[1] < acks[2]);
        CHECK(acks[2] < acks[3]);
    }
}
