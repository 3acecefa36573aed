#include "ltevid/dsp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "ltevid/errors.hpp"

namespace ltevid::dsp {
namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : n(n), data(fftw_alloc_complex(n)) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    std::size_t n;
    fftw_complex* data;
};

// In-place plan; executed on per-thread buffers with fftw_execute_dft, which
// FFTW documents as thread-safe.
fftw_plan plan_for(std::size_t n, int sign) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, int>, fftw_plan> plans;
    std::lock_guard lock(mu);
    auto& p = plans[{n, sign}];
    if (!p) {
        FftwBuffer scratch(n);
        p = fftw_plan_dft_1d(static_cast<int>(n), scratch.data, scratch.data, sign, FFTW_ESTIMATE);
    }
    return p;
}

fftw_complex* thread_buffer(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<FftwBuffer>> buffers;
    auto& b = buffers[n];
    if (!b) b = std::make_unique<FftwBuffer>(n);
    return b->data;
}

void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
    const std::size_t n = in.size();
    if (out.size() != n || n == 0) throw ContractError("dft: input and output lengths differ");
    fftw_plan plan = plan_for(n, sign);
    fftw_complex* buf = thread_buffer(n);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = in[i].real();
        buf[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan, buf, buf);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) out[i] = {buf[i][0] * scale, buf[i][1] * scale};
}

}  // namespace

void dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    transform(in, out, FFTW_FORWARD);
}

void idft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    transform(in, out, FFTW_BACKWARD);
}

}  // namespace ltevid::dsp
