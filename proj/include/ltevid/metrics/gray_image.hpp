#pragma once

#include <cstddef>
#include <vector>

#include "ltevid/video/yuv.hpp"

namespace ltevid::metrics {

/// Real-valued grayscale image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> samples;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), samples(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return samples[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return samples[y * width + x]; }

    static GrayImage from_plane(const video::Plane& p);
    /// Luma plane of the frame.
    static GrayImage from_frame(const video::Frame& f) { return from_plane(f.y); }
};

/// ContractError unless both images have the same dimensions.
void require_same_size(const GrayImage& a, const GrayImage& b);

/// Separable normalised Gaussian blur with edge replication.
GrayImage gaussian_blur(const GrayImage& img, int size, double sigma);
/// size x size mean filter with edge replication.
GrayImage box_blur(const GrayImage& img, int size);

}  // namespace ltevid::metrics
