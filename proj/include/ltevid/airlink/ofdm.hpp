#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "ltevid/airlink/constellation.hpp"

namespace ltevid::airlink {

inline constexpr double kSubcarrierSpacingHz = 15e3;
inline constexpr std::size_t kSymbolsPerSlot = 7;

/// Downlink numerology with normal cyclic prefix.
struct OfdmConfig {
    std::size_t fft_size = 128;
    std::size_t active_subcarriers = 72;
    std::vector<std::size_t> cp_lengths{10, 9, 9, 9, 9, 9, 9};  // one slot

    /// fft_size in {128, 256, 512, 1024, 1536, 2048}. Throws ConfigError otherwise.
    static OfdmConfig for_fft_size(std::size_t fft_size);

    /// "1.4mhz", "3mhz", "5mhz", "10mhz", "15mhz", "20mhz" or a bare FFT size.
    static OfdmConfig preset(std::string_view name);

    double sample_rate() const noexcept { return static_cast<double>(fft_size) * kSubcarrierSpacingHz; }
    std::size_t cp_length(std::size_t symbol) const { return cp_lengths[symbol % cp_lengths.size()]; }
    std::size_t min_cp_length() const;
    std::size_t samples_for(std::size_t symbols) const;

    /// FFT bin of active subcarrier index k: lower half on negative bins, DC skipped.
    std::size_t bin_of(std::size_t k) const noexcept {
        const std::size_t half = active_subcarriers / 2;
        return k < half ? fft_size - half + k : k - half + 1;
    }

    /// Throws ConfigError when the fields are inconsistent.
    void validate() const;
};

/// Complex symbols over active subcarriers x OFDM symbols, subcarrier fastest.
class ResourceGrid {
public:
    ResourceGrid() = default;
    ResourceGrid(std::size_t subcarriers, std::size_t symbols)
        : nsc_(subcarriers), nsym_(symbols), data_(subcarriers * symbols) {}

    std::size_t subcarriers() const noexcept { return nsc_; }
    std::size_t symbols() const noexcept { return nsym_; }

    Complex& at(std::size_t sc, std::size_t sym) { return data_[sym * nsc_ + sc]; }
    const Complex& at(std::size_t sc, std::size_t sym) const { return data_[sym * nsc_ + sc]; }

    std::span<Complex> symbol(std::size_t sym) { return {data_.data() + sym * nsc_, nsc_}; }
    std::span<const Complex> symbol(std::size_t sym) const { return {data_.data() + sym * nsc_, nsc_}; }

    /// Frequency-first flat view: element s sits on subcarrier s % Nsc of symbol s / Nsc.
    std::span<Complex> flat() noexcept { return data_; }
    std::span<const Complex> flat() const noexcept { return data_; }

private:
    std::size_t nsc_ = 0;
    std::size_t nsym_ = 0;
    std::vector<Complex> data_;
};

/// Fills a grid frequency-first, zero-padding the last OFDM symbol.
ResourceGrid map_to_grid(std::span<const Complex> symbols, std::size_t subcarriers);

std::vector<Complex> ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg);

/// Throws FramingError unless samples hold a whole number of OFDM symbols.
ResourceGrid ofdm_demodulate(std::span<const Complex> samples, const OfdmConfig& cfg);

}  // namespace ltevid::airlink
