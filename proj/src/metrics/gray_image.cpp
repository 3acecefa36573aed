#include "ltevid/metrics/gray_image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltevid/errors.hpp"

namespace ltevid::metrics {
namespace {

GrayImage separable(const GrayImage& img, const std::vector<double>& k) {
    const long r = static_cast<long>(k.size() / 2);
    const long w = static_cast<long>(img.width), h = static_cast<long>(img.height);
    GrayImage tmp(img.width, img.height), out(img.width, img.height);
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            double s = 0;
            for (long i = -r; i <= r; ++i)
                s += k[static_cast<std::size_t>(i + r)] *
                     img.at(static_cast<std::size_t>(std::clamp(x + i, 0L, w - 1)), static_cast<std::size_t>(y));
            tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = s;
        }
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            double s = 0;
            for (long i = -r; i <= r; ++i)
                s += k[static_cast<std::size_t>(i + r)] *
                     tmp.at(static_cast<std::size_t>(x), static_cast<std::size_t>(std::clamp(y + i, 0L, h - 1)));
            out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = s;
        }
    return out;
}

}  // namespace

GrayImage GrayImage::from_plane(const video::Plane& p) {
    GrayImage g(p.width, p.height);
    std::copy(p.samples.begin(), p.samples.end(), g.samples.begin());
    return g;
}

void require_same_size(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw ContractError("image dimensions differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                            " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
}

GrayImage gaussian_blur(const GrayImage& img, int size, double sigma) {
    if (size < 1 || size % 2 == 0 || !(sigma > 0)) throw ContractError("gaussian kernel needs odd size and sigma > 0");
    std::vector<double> k(static_cast<std::size_t>(size));
    double sum = 0;
    for (int i = 0; i < size; ++i) {
        const double d = i - size / 2;
        k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (auto& v : k) v /= sum;
    return separable(img, k);
}

GrayImage box_blur(const GrayImage& img, int size) {
    if (size < 1 || size % 2 == 0) throw ContractError("box kernel needs odd size");
    return separable(img, std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
}

}  // namespace ltevid::metrics
