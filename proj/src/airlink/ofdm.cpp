#include "ltevid/airlink/ofdm.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ltevid/dsp/fft.hpp"
#include "ltevid/errors.hpp"

namespace ltevid::airlink {

OfdmConfig OfdmConfig::for_fft_size(std::size_t fft_size) {
    // Active subcarriers per channel bandwidth; CP scales with the FFT size
    // from 160/144 samples at 2048.
    struct Row {
        std::size_t n, nsc;
    };
    static constexpr Row rows[] = {{128, 72}, {256, 180}, {512, 300}, {1024, 600}, {1536, 900}, {2048, 1200}};
    for (const auto& r : rows) {
        if (r.n != fft_size) continue;
        OfdmConfig cfg;
        cfg.fft_size = r.n;
        cfg.active_subcarriers = r.nsc;
        const std::size_t first = 160 * r.n / 2048, rest = 144 * r.n / 2048;
        cfg.cp_lengths = {first, rest, rest, rest, rest, rest, rest};
        return cfg;
    }
    throw ConfigError("unsupported FFT size " + std::to_string(fft_size));
}

OfdmConfig OfdmConfig::preset(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "1.4mhz") return for_fft_size(128);
    if (s == "3mhz") return for_fft_size(256);
    if (s == "5mhz") return for_fft_size(512);
    if (s == "10mhz") return for_fft_size(1024);
    if (s == "15mhz") return for_fft_size(1536);
    if (s == "20mhz") return for_fft_size(2048);
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        return for_fft_size(std::stoul(s));
    throw ConfigError("unknown OFDM preset '" + std::string(name) + "'");
}

std::size_t OfdmConfig::min_cp_length() const {
    return cp_lengths.empty() ? 0 : *std::min_element(cp_lengths.begin(), cp_lengths.end());
}

std::size_t OfdmConfig::samples_for(std::size_t symbols) const {
    std::size_t n = 0;
    for (std::size_t s = 0; s < symbols; ++s) n += fft_size + cp_length(s);
    return n;
}

void OfdmConfig::validate() const {
    if (fft_size < 2) throw ConfigError("OFDM: FFT size too small");
    if (active_subcarriers == 0 || active_subcarriers % 2 != 0 || active_subcarriers > fft_size - 1)
        throw ConfigError("OFDM: active subcarriers must be even and below the FFT size");
    if (cp_lengths.empty() || min_cp_length() == 0) throw ConfigError("OFDM: cyclic prefix lengths must be positive");
}

ResourceGrid map_to_grid(std::span<const Complex> symbols, std::size_t subcarriers) {
    if (subcarriers == 0) throw ContractError("map_to_grid: no subcarriers");
    ResourceGrid grid(subcarriers, (symbols.size() + subcarriers - 1) / subcarriers);
    std::copy(symbols.begin(), symbols.end(), grid.flat().begin());
    return grid;
}

std::vector<Complex> ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg) {
    if (grid.subcarriers() != cfg.active_subcarriers)
        throw ContractError("ofdm_modulate: grid has " + std::to_string(grid.subcarriers()) +
                            " subcarriers, configuration expects " + std::to_string(cfg.active_subcarriers));
    const std::size_t n = cfg.fft_size;
    std::vector<Complex> out;
    out.reserve(cfg.samples_for(grid.symbols()));
    std::vector<Complex> bins(n), time(n);
    for (std::size_t sym = 0; sym < grid.symbols(); ++sym) {
        std::fill(bins.begin(), bins.end(), Complex{});
        const auto values = grid.symbol(sym);
        for (std::size_t k = 0; k < values.size(); ++k) bins[cfg.bin_of(k)] = values[k];
        dsp::idft(bins, time);
        const std::size_t cp = cfg.cp_length(sym);
        out.insert(out.end(), time.end() - static_cast<std::ptrdiff_t>(cp), time.end());
        out.insert(out.end(), time.begin(), time.end());
    }
    return out;
}

ResourceGrid ofdm_demodulate(std::span<const Complex> samples, const OfdmConfig& cfg) {
    const std::size_t n = cfg.fft_size;
    std::size_t symbols = 0, used = 0;
    while (used < samples.size()) {
        used += n + cfg.cp_length(symbols);
        ++symbols;
    }
    if (used != samples.size())
        throw FramingError("ofdm_demodulate: " + std::to_string(samples.size()) +
                           " samples is not a whole number of OFDM symbols");
    ResourceGrid grid(cfg.active_subcarriers, symbols);
    std::vector<Complex> bins(n);
    std::size_t pos = 0;
    for (std::size_t sym = 0; sym < symbols; ++sym) {
        pos += cfg.cp_length(sym);
        dsp::dft(samples.subspan(pos, n), bins);
        pos += n;
        auto dst = grid.symbol(sym);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = bins[cfg.bin_of(k)];
    }
    return grid;
}

}  // namespace ltevid::airlink
