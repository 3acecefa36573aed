#include "ltevid/video/dct.hpp"

#include <cmath>
#include <numbers>

namespace ltevid::video {
namespace {

struct Basis {
    double c[8][8];  // c[k][n]
    Basis() {
        for (int k = 0; k < 8; ++k) {
            const double a = k == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
            for (int n = 0; n < 8; ++n) c[k][n] = a * std::cos((2 * n + 1) * k * std::numbers::pi / 16);
        }
    }
};

const Basis& basis() {
    static const Basis b;
    return b;
}

}  // namespace

Block8 dct8x8(const Block8& in) {
    const auto& c = basis().c;
    Block8 tmp{}, out{};
    for (int y = 0; y < 8; ++y)
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int x = 0; x < 8; ++x) s += c[v][x] * in[y * 8 + x];
            tmp[y * 8 + v] = s;
        }
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int y = 0; y < 8; ++y) s += c[u][y] * tmp[y * 8 + v];
            out[u * 8 + v] = s;
        }
    return out;
}

Block8 idct8x8(const Block8& in) {
    const auto& c = basis().c;
    Block8 tmp{}, out{};
    for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int v = 0; v < 8; ++v) s += c[v][x] * in[u * 8 + v];
            tmp[u * 8 + x] = s;
        }
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int u = 0; u < 8; ++u) s += c[u][y] * tmp[u * 8 + x];
            out[y * 8 + x] = s;
        }
    return out;
}

const std::array<int, 64>& zigzag_order() {
    static const std::array<int, 64> order = [] {
        std::array<int, 64> o{};
        int i = 0;
        for (int s = 0; s < 15; ++s) {
            // Odd diagonals run top-right to bottom-left.
            for (int k = 0; k <= s; ++k) {
                const int r = (s % 2) ? k : s - k;
                const int col = s - r;
                if (r < 8 && col < 8) o[i++] = r * 8 + col;
            }
        }
        return o;
    }();
    return order;
}

}  // namespace ltevid::video
