#include "ltevid/metrics/fidelity.hpp"

#include <cmath>
#include <limits>

#include "ltevid/errors.hpp"

namespace ltevid::metrics {
namespace {

/// Valid-region separable filter: output is (w - n + 1) x (h - n + 1).
GrayImage filter_valid(const GrayImage& img, const std::vector<double>& k) {
    const std::size_t n = k.size();
    const std::size_t ow = img.width - n + 1, oh = img.height - n + 1;
    GrayImage tmp(ow, img.height), out(ow, oh);
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += k[i] * img.at(x + i, y);
            tmp.at(x, y) = s;
        }
    for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += k[i] * tmp.at(x, y + i);
            out.at(x, y) = s;
        }
    return out;
}

}  // namespace

double psnr(const GrayImage& ref, const GrayImage& test) {
    require_same_size(ref, test);
    double mse = 0;
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
        const double d = ref.samples[i] - test.samples[i];
        mse += d * d;
    }
    if (mse == 0) return std::numeric_limits<double>::infinity();
    mse /= static_cast<double>(ref.samples.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const GrayImage& ref, const GrayImage& test, const SsimParams& params) {
    require_same_size(ref, test);
    const auto n = static_cast<std::size_t>(params.window);
    if (params.window < 1 || ref.width < n || ref.height < n) throw ContractError("image smaller than the SSIM window");

    std::vector<double> k(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(n - 1) / 2;
        k[i] = std::exp(-d * d / (2 * params.sigma * params.sigma));
        sum += k[i];
    }
    for (auto& v : k) v /= sum;

    GrayImage xx(ref.width, ref.height), yy(ref.width, ref.height), xy(ref.width, ref.height);
    for (std::size_t i = 0; i < ref.samples.size(); ++i) {
        xx.samples[i] = ref.samples[i] * ref.samples[i];
        yy.samples[i] = test.samples[i] * test.samples[i];
        xy.samples[i] = ref.samples[i] * test.samples[i];
    }
    const auto mx = filter_valid(ref, k), my = filter_valid(test, k);
    const auto sxx = filter_valid(xx, k), syy = filter_valid(yy, k), sxy = filter_valid(xy, k);

    const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
    const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
    double total = 0;
    for (std::size_t i = 0; i < mx.samples.size(); ++i) {
        const double ux = mx.samples[i], uy = my.samples[i];
        const double vx = sxx.samples[i] - ux * ux;
        const double vy = syy.samples[i] - uy * uy;
        const double cxy = sxy.samples[i] - ux * uy;
        total += ((2 * ux * uy + c1) * (2 * cxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.samples.size());
}

}  // namespace ltevid::metrics
