#include "ltevid/metrics/blur.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ltevid/errors.hpp"
#include "ltevid/video/dct.hpp"

namespace ltevid::metrics {

std::array<std::size_t, 64> dct_occurrence(const GrayImage& img, const BlurParams& params) {
    if (img.width < 8 || img.height < 8) throw ContractError("blur needs at least one 8x8 block");
    std::array<std::size_t, 64> hist{};
    video::Block8 blk;
    for (std::size_t by = 0; by < (img.height + 7) / 8; ++by)
        for (std::size_t bx = 0; bx < (img.width + 7) / 8; ++bx) {
            for (std::size_t y = 0; y < 8; ++y)
                for (std::size_t x = 0; x < 8; ++x)
                    blk[y * 8 + x] = img.at(std::min(bx * 8 + x, img.width - 1), std::min(by * 8 + y, img.height - 1));
            const auto c = video::dct8x8(blk);
            for (int i = 0; i < 64; ++i)
                if (std::abs(c[i]) > params.threshold) ++hist[i];
        }
    return hist;
}

double blur_weight(int u, int v) { return (u == 0 && v == 0) ? 0.0 : 8.0 - std::abs(u - v); }

double blur_score(const GrayImage& img, const BlurParams& params) {
    const auto hist = dct_occurrence(img, params);
    const double limit = params.activity_ratio * static_cast<double>(hist[0]);
    double inactive = 0, total = 0;
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            const double w = blur_weight(u, v);
            total += w;
            if (static_cast<double>(hist[u * 8 + v]) <= limit) inactive += w;
        }
    return inactive / total;
}

}  // namespace ltevid::metrics
