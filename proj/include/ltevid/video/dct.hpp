#pragma once

#include <array>

namespace ltevid::video {

using Block8 = std::array<double, 64>;

/// Orthonormal 2-D DCT-II of an 8x8 block, row-major in and out
/// (out[u*8+v], u vertical frequency).
Block8 dct8x8(const Block8& in);
/// Inverse of dct8x8.
Block8 idct8x8(const Block8& in);

/// zigzag_order()[i] is the row-major position of the i-th coefficient in
/// JPEG zigzag order.
const std::array<int, 64>& zigzag_order();

}  // namespace ltevid::video
