#pragma once

#include <complex>
#include <span>

namespace ltevid::dsp {

/// Unitary DFT of any length (scaled by 1/sqrt(n) in both directions).
/// Plans are built once per (length, direction) and shared; calls are thread-safe.
void dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void idft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace ltevid::dsp
