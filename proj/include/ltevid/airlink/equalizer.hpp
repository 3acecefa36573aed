#pragma once

#include <span>
#include <vector>

#include "ltevid/airlink/ofdm.hpp"
#include "ltevid/errors.hpp"

namespace ltevid::airlink {

/// A subcarrier with H = 0 cannot be equalised.
class DeepNullError : public Error {
public:
    using Error::Error;
};

struct EqualizedGrid {
    ResourceGrid grid;
    std::vector<double> noise_var;  // per subcarrier, sigma^2 / |H_k|^2
};

/// Single-tap zero-forcing with known H. Throws DeepNullError if any H_k = 0.
EqualizedGrid equalize(const ResourceGrid& rx, std::span<const Complex> h, double noise_var);

/// As equalize, but null subcarriers get zeroed symbols and infinite noise
/// variance so the demapper erases them.
EqualizedGrid equalize_with_erasures(const ResourceGrid& rx, std::span<const Complex> h, double noise_var);

}  // namespace ltevid::airlink
