#include "ltevid/airlink/constellation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "ltevid/errors.hpp"

namespace ltevid::airlink {
namespace {

// Axis amplitude (before normalisation) for the axis bits of one symbol, as in
// the downlink modulation-mapper tables: QPSK 1-2b; 16QAM (1-2b0)(1+2b2);
// 64QAM (1-2b0)(4-(1-2b2)(2-(1-2b4))).
int axis_amplitude(int qm, unsigned axis_bits) {
    const int half = qm / 2;
    auto bit = [&](int i) { return static_cast<int>((axis_bits >> (half - 1 - i)) & 1u); };
    switch (qm) {
        case 2: return 1 - 2 * bit(0);
        case 4: return (1 - 2 * bit(0)) * (1 + 2 * bit(1));
        default: return (1 - 2 * bit(0)) * (4 - (1 - 2 * bit(1)) * (2 - (1 - 2 * bit(2))));
    }
}

double normalisation(int qm) {
    switch (qm) {
        case 2: return 1.0 / std::sqrt(2.0);
        case 4: return 1.0 / std::sqrt(10.0);
        default: return 1.0 / std::sqrt(42.0);
    }
}

}  // namespace

std::string_view modulation_name(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return "qpsk";
        case Modulation::qam16: return "16qam";
        case Modulation::qam64: return "64qam";
    }
    return "?";
}

std::optional<Modulation> parse_modulation(std::string_view text) {
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "qpsk") return Modulation::qpsk;
    if (s == "16qam" || s == "qam16") return Modulation::qam16;
    if (s == "64qam" || s == "qam64") return Modulation::qam64;
    return std::nullopt;
}

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return 2;
        case Modulation::qam16: return 4;
        case Modulation::qam64: return 6;
    }
    return 0;
}

const Constellation& Constellation::get(Modulation m) {
    static const Constellation qpsk(Modulation::qpsk);
    static const Constellation qam16(Modulation::qam16);
    static const Constellation qam64(Modulation::qam64);
    switch (m) {
        case Modulation::qpsk: return qpsk;
        case Modulation::qam16: return qam16;
        default: return qam64;
    }
}

Constellation::Constellation(Modulation m) : mod_(m), qm_(airlink::bits_per_symbol(m)) {
    const int half = qm_ / 2;
    const double scale = normalisation(qm_);
    for (unsigned b = 0; b < (1u << half); ++b) levels_.push_back({axis_amplitude(qm_, b) * scale, static_cast<std::uint8_t>(b)});

    points_.resize(std::size_t{1} << qm_);
    for (unsigned label = 0; label < points_.size(); ++label) {
        unsigned ibits = 0, qbits = 0;
        for (int i = 0; i < qm_; ++i) {
            const unsigned b = (label >> (qm_ - 1 - i)) & 1u;
            if (i % 2 == 0)
                ibits = (ibits << 1) | b;
            else
                qbits = (qbits << 1) | b;
        }
        points_[label] = Complex(axis_amplitude(qm_, ibits), axis_amplitude(qm_, qbits)) * scale;
    }
}

std::vector<Complex> map_symbols(std::span<const std::uint8_t> bits, Modulation m) {
    const auto& c = Constellation::get(m);
    const std::size_t qm = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % qm != 0)
        throw FramingError("map_symbols: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                           std::to_string(qm));
    std::vector<Complex> out(bits.size() / qm);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t i = 0; i < qm; ++i) label = (label << 1) | (bits[s * qm + i] & 1u);
        out[s] = c.points()[label];
    }
    return out;
}

namespace {

// Per-axis max-log: the orthogonal axis contributes the same minimum to both
// hypotheses and cancels, so each axis is demapped as a PAM.
void demap_axis(double y, std::span<const Constellation::AxisLevel> levels, int half, double inv_n0,
                float* out, int stride) {
    double best0[3], best1[3];
    std::fill(best0, best0 + half, std::numeric_limits<double>::infinity());
    std::fill(best1, best1 + half, std::numeric_limits<double>::infinity());
    for (const auto& lv : levels) {
        const double d = (y - lv.amplitude) * (y - lv.amplitude);
        for (int i = 0; i < half; ++i) {
            if ((lv.bits >> (half - 1 - i)) & 1u)
                best1[i] = std::min(best1[i], d);
            else
                best0[i] = std::min(best0[i], d);
        }
    }
    for (int i = 0; i < half; ++i) out[i * stride] = static_cast<float>((best1[i] - best0[i]) * inv_n0);
}

}  // namespace

phy::Llrs demap_llr(std::span<const Complex> symbols, Modulation m, std::span<const double> noise_var) {
    if (noise_var.size() != symbols.size()) throw ContractError("demap_llr: one noise variance per symbol");
    const auto& c = Constellation::get(m);
    const int qm = c.bits_per_symbol();
    const int half = qm / 2;
    phy::Llrs out(symbols.size() * static_cast<std::size_t>(qm), 0.0f);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const double n0 = noise_var[s];
        if (!(n0 > 0.0)) throw ContractError("demap_llr: noise variance must be positive");
        if (std::isinf(n0)) continue;
        float* llr = out.data() + s * static_cast<std::size_t>(qm);
        demap_axis(symbols[s].real(), c.axis_levels(), half, 1.0 / n0, llr, 2);
        demap_axis(symbols[s].imag(), c.axis_levels(), half, 1.0 / n0, llr + 1, 2);
    }
    return out;
}

phy::Llrs demap_llr(std::span<const Complex> symbols, Modulation m, double noise_var) {
    if (!(noise_var > 0.0)) throw ContractError("demap_llr: noise variance must be positive");
    const std::vector<double> nv(symbols.size(), noise_var);
    return demap_llr(symbols, m, nv);
}

}  // namespace ltevid::airlink
