#pragma once

#include <string>
#include <vector>

#include "ltevid/metrics/blocking.hpp"
#include "ltevid/metrics/blur.hpp"
#include "ltevid/metrics/fidelity.hpp"
#include "ltevid/video/yuv.hpp"

namespace ltevid::metrics {

struct MetricParams {
    BlockingParams blocking;
    BlurParams blur;
    SsimParams ssim;
    double log_floor = 1e-12;

    /// "key=value" lines, stable order, for result headers.
    std::vector<std::string> describe() const;
};

struct FrameScores {
    double blocking = 0;
    double blocking_log10 = 0;
    double blur = 0;
    double psnr_db = 0;
    double ssim = 0;
};

struct Aggregate {
    double mean = 0;
    double median = 0;
};

struct QualityReport {
    std::vector<FrameScores> frames;
    Aggregate blocking, blocking_log10, blur, psnr_db, ssim;
};

/// log10(max(value, floor)).
double log_blocking(double value, double floor = 1e-12);

/// Mean and median (average of the middle pair for even counts). Infinite
/// values propagate. ContractError on an empty input.
Aggregate aggregate(std::vector<double> values);

/// Per-frame luma scores of test against ref. blocking and blur look at test
/// only. ContractError on mismatched sequences.
QualityReport score_sequence(const video::VideoSequence& ref, const video::VideoSequence& test,
                             const MetricParams& params = {});

}  // namespace ltevid::metrics
