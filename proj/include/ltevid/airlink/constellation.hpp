#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ltevid/phy/bits.hpp"

namespace ltevid::airlink {

using Complex = std::complex<double>;

enum class Modulation { qpsk, qam16, qam64 };

std::string_view modulation_name(Modulation m);

/// Accepts "qpsk", "16qam"/"qam16", "64qam"/"qam64" (case-insensitive).
std::optional<Modulation> parse_modulation(std::string_view text);

int bits_per_symbol(Modulation m);

/// Gray-labelled square constellation with unit average energy. points()[label]
/// where label packs b(i) as the most significant bit.
class Constellation {
public:
    static const Constellation& get(Modulation m);

    Modulation modulation() const noexcept { return mod_; }
    int bits_per_symbol() const noexcept { return qm_; }
    std::span<const Complex> points() const noexcept { return points_; }

    /// Amplitude levels of one axis and the axis bits labelling each level.
    /// The in-phase axis carries b(i), b(i+2), ...; quadrature b(i+1), b(i+3), ...
    struct AxisLevel {
        double amplitude;
        std::uint8_t bits;  // qm/2 bits, first axis bit in the MSB
    };
    std::span<const AxisLevel> axis_levels() const noexcept { return levels_; }

private:
    explicit Constellation(Modulation m);

    Modulation mod_;
    int qm_;
    std::vector<Complex> points_;
    std::vector<AxisLevel> levels_;
};

/// Throws FramingError when bits.size() is not a multiple of Qm.
std::vector<Complex> map_symbols(std::span<const std::uint8_t> bits, Modulation m);

/// Max-log LLRs (positive favours 0) with complex noise variance noise_var (N0).
/// Throws ContractError for noise_var <= 0.
phy::Llrs demap_llr(std::span<const Complex> symbols, Modulation m, double noise_var);

/// Per-symbol noise variances; an infinite variance yields zero LLRs (erasure).
phy::Llrs demap_llr(std::span<const Complex> symbols, Modulation m, std::span<const double> noise_var);

}  // namespace ltevid::airlink
