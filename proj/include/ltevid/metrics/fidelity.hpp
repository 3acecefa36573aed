#pragma once

#include "ltevid/metrics/gray_image.hpp"

namespace ltevid::metrics {

/// 10 log10(255^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& ref, const GrayImage& test);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
};

/// Mean SSIM over the valid region of a Gaussian window (no padding).
/// ContractError on mismatched sizes or a side shorter than the window.
double ssim(const GrayImage& ref, const GrayImage& test, const SsimParams& params = {});

}  // namespace ltevid::metrics
