#pragma once

#include <array>

#include "ltevid/metrics/gray_image.hpp"

namespace ltevid::metrics {

struct BlurParams {
    /// A coefficient counts as present when |c| > threshold (orthonormal DCT).
    double threshold = 1.0;
    /// A frequency is inactive when present in at most this fraction of the
    /// blocks that have a DC term.
    double activity_ratio = 0.1;
};

/// Occurrence counts per DCT position over all 8x8 blocks (edge-replicated
/// to a multiple of 8), index u*8+v.
std::array<std::size_t, 64> dct_occurrence(const GrayImage& img, const BlurParams& params = {});

/// Weight of position (u, v): 8 - |u - v|. DC has weight 0.
double blur_weight(int u, int v);

/// Weighted fraction of inactive AC positions in [0, 1]; 1 is fully blurred.
double blur_score(const GrayImage& img, const BlurParams& params = {});

}  // namespace ltevid::metrics
