#include "ltevid/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltevid/errors.hpp"

namespace ltevid::metrics {

std::vector<std::string> MetricParams::describe() const {
    auto line = [](const char* key, auto value) {
        std::ostringstream os;
        os << key << '=' << value;
        return os.str();
    };
    return {
        line("blocking.block_period", blocking.block_period),
        line("blocking.window", blocking.window),
        "blocking.window_function=hann",
        "blocking.overlap=0.5",
        "blocking.signal=abs_difference",
        line("blocking.median_bins", blocking.median_bins),
        line("blocking.peak_halfwidth", blocking.peak_halfwidth),
        line("blocking.nyquist_weight", blocking.nyquist_weight),
        line("blocking.log_floor", log_floor),
        line("blur.threshold", blur.threshold),
        line("blur.activity_ratio", blur.activity_ratio),
        "blur.weights=8-|u-v|",
        line("ssim.window", ssim.window),
        line("ssim.sigma", ssim.sigma),
        line("ssim.k1", ssim.k1),
        line("ssim.k2", ssim.k2),
        "metrics.plane=luma",
    };
}

double log_blocking(double value, double floor) { return std::log10(std::max(value, floor)); }

Aggregate aggregate(std::vector<double> values) {
    if (values.empty()) throw ContractError("cannot aggregate an empty series");
    Aggregate a;
    double sum = 0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    a.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return a;
}

QualityReport score_sequence(const video::VideoSequence& ref, const video::VideoSequence& test,
                             const MetricParams& params) {
    if (ref.size() != test.size() || ref.width != test.width || ref.height != test.height)
        throw ContractError("sequences differ in frame count or size");
    if (ref.size() == 0) throw ContractError("empty sequence");
    QualityReport r;
    std::vector<double> bl, bll, bu, ps, ss;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto a = GrayImage::from_frame(ref.frames[i]);
        const auto b = GrayImage::from_frame(test.frames[i]);
        FrameScores f;
        f.blocking = blocking_score(b, params.blocking);
        f.blocking_log10 = log_blocking(f.blocking, params.log_floor);
        f.blur = blur_score(b, params.blur);
        f.psnr_db = psnr(a, b);
        f.ssim = ssim(a, b, params.ssim);
        r.frames.push_back(f);
        bl.push_back(f.blocking);
        bll.push_back(f.blocking_log10);
        bu.push_back(f.blur);
        ps.push_back(f.psnr_db);
        ss.push_back(f.ssim);
    }
    r.blocking = aggregate(bl);
    r.blocking_log10 = aggregate(bll);
    r.blur = aggregate(bu);
    r.psnr_db = aggregate(ps);
    r.ssim = aggregate(ss);
    return r;
}

}  // namespace ltevid::metrics
