#include "ltevid/metrics/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "ltevid/dsp/fft.hpp"
#include "ltevid/errors.hpp"

namespace ltevid::metrics {
namespace {

void check(const BlockingParams& p) {
    if (p.window < 128 || (p.window & (p.window - 1))) throw ContractError("window must be a power of two >= 128");
    if (p.block_period < 2 || p.window % p.block_period)
        throw ContractError("block period must divide the window length");
    if (p.median_bins == 0 || p.median_bins % 2 == 0 || p.median_bins > p.window)
        throw ContractError("median filter width must be odd");
}

GrayImage transpose(const GrayImage& img) {
    GrayImage t(img.height, img.width);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x) t.at(y, x) = img.at(x, y);
    return t;
}

}  // namespace

std::vector<double> difference_spectrum(const GrayImage& img, const BlockingParams& params) {
    check(params);
    const std::size_t n = params.window;
    // One slot per pixel keeps each row a whole number of block periods long;
    // the last slot of a row has no right neighbour and stays zero.
    std::vector<double> d(img.width * img.height, 0.0);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x + 1 < img.width; ++x) d[y * img.width + x] = std::abs(img.at(x + 1, y) - img.at(x, y));

    std::vector<double> win(n);
    double wpow = 0;
    for (std::size_t i = 0; i < n; ++i) {
        win[i] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        wpow += win[i] * win[i];
    }

    std::vector<double> spec(n, 0.0);
    std::vector<std::complex<double>> buf(n), out(n);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= d.size(); start += n / 2, ++segments) {
        for (std::size_t i = 0; i < n; ++i) buf[i] = d[start + i] * win[i];
        dsp::dft(buf, out);
        // dft is unitary; the n / wpow factor restores a periodogram scale.
        for (std::size_t k = 0; k < n; ++k) spec[k] += std::norm(out[k]) * static_cast<double>(n) / wpow;
    }
    if (segments == 0) throw ContractError("image holds fewer samples than one window");
    for (auto& s : spec) s /= static_cast<double>(segments);
    return spec;
}

double harmonic_excess(const std::vector<double>& spectrum, const BlockingParams& params) {
    check(params);
    const std::size_t n = params.window;
    if (spectrum.size() != n) throw ContractError("spectrum length must equal the window");
    const long half = static_cast<long>(params.median_bins / 2);
    auto bin = [&](long k) { return spectrum[static_cast<std::size_t>(((k % long(n)) + long(n)) % long(n))]; };

    double total = 0, weights = 0;
    const std::size_t step = n / params.block_period;
    for (std::size_t i = 1; i <= params.block_period / 2; ++i) {
        const long k = static_cast<long>(i * step);
        std::vector<double> nb;
        for (long j = -half; j <= half; ++j) nb.push_back(bin(k + j));
        std::nth_element(nb.begin(), nb.begin() + half, nb.end());
        const double baseline = nb[static_cast<std::size_t>(half)];
        double peak = 0;
        for (long j = -long(params.peak_halfwidth); j <= long(params.peak_halfwidth); ++j) peak = std::max(peak, bin(k + j));
        const double w = 2 * i == params.block_period ? params.nyquist_weight : 1.0;
        total += w * std::max(0.0, peak - baseline);
        weights += w;
    }
    return total / weights;
}

double blocking_score(const GrayImage& img, const BlockingParams& params) {
    if (img.width < 2 * params.block_period || img.height < 2 * params.block_period)
        throw ContractError("image too small for blocking measurement: " + std::to_string(img.width) + "x" +
                            std::to_string(img.height));
    const double h = harmonic_excess(difference_spectrum(img, params), params);
    const double v = harmonic_excess(difference_spectrum(transpose(img), params), params);
    return 0.5 * (h + v);
}

}  // namespace ltevid::metrics
