#pragma once

#include <cstddef>

#include "ltevid/metrics/gray_image.hpp"

namespace ltevid::metrics {

/// Knobs of the spectral blockiness measure.
struct BlockingParams {
    std::size_t block_period = 8;
    /// Power of two, at least 128.
    std::size_t window = 256;
    /// Bins in the median filter that estimates the smooth baseline (odd).
    std::size_t median_bins = 9;
    /// Peaks are picked from harmonic bin +/- this many bins.
    std::size_t peak_halfwidth = 1;
    /// Weight of the Nyquist harmonic, which has no mirror image.
    double nyquist_weight = 0.5;
};

/// Averaged periodogram (Hann, half overlap) of the absolute horizontal
/// difference signal with rows laid end to end, length params.window.
/// Exposed for tests.
std::vector<double> difference_spectrum(const GrayImage& img, const BlockingParams& params = {});

/// Blockiness of one direction from a spectrum: mean excess of the harmonic
/// peaks at multiples of window/block_period over the median baseline.
double harmonic_excess(const std::vector<double>& spectrum, const BlockingParams& params = {});

/// No-reference blockiness, mean of the row and column measures. >= 0, and 0
/// for a constant image. ContractError if a side is under 2 * block_period.
double blocking_score(const GrayImage& img, const BlockingParams& params = {});

}  // namespace ltevid::metrics
