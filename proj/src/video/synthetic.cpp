#include "ltevid/video/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ltevid::video {
namespace {

struct Px {
    double y, u, v;
};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double lattice(long ix, long iy, std::uint64_t seed) {
    const auto h = splitmix(seed ^ splitmix(static_cast<std::uint64_t>(ix) * 0x1F123BB5ull ^
                                            splitmix(static_cast<std::uint64_t>(iy))));
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double smooth(double t) { return t * t * (3 - 2 * t); }

/// Value noise in [-1, 1] with lattice spacing `scale` pixels.
double noise(double x, double y, double scale, std::uint64_t seed) {
    const double fx = x / scale, fy = y / scale;
    const double x0 = std::floor(fx), y0 = std::floor(fy);
    const long ix = static_cast<long>(x0), iy = static_cast<long>(y0);
    const double tx = smooth(fx - x0), ty = smooth(fy - y0);
    const double a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
    const double c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
    return (a + (b - a) * tx) * (1 - ty) + (c + (d - c) * tx) * ty;
}

double fbm(double x, double y, double scale, int octaves, std::uint64_t seed) {
    double s = 0, amp = 1, norm = 0;
    for (int o = 0; o < octaves; ++o) {
        s += amp * noise(x, y, scale, seed + static_cast<std::uint64_t>(o) * 7919);
        norm += amp;
        amp *= 0.5;
        scale *= 0.5;
    }
    return s / norm;
}

/// Anti-aliased coverage of an axis-aligned ellipse.
double ellipse(double x, double y, double cx, double cy, double rx, double ry) {
    const double dx = (x - cx) / rx, dy = (y - cy) / ry;
    const double d = (std::sqrt(dx * dx + dy * dy) - 1.0) * std::min(rx, ry);
    return std::clamp(0.5 - d, 0.0, 1.0);
}

double rect(double x, double y, double x0, double y0, double x1, double y1) {
    const double cx = std::clamp(std::min(x - x0, x1 - x) + 0.5, 0.0, 1.0);
    const double cy = std::clamp(std::min(y - y0, y1 - y) + 0.5, 0.0, 1.0);
    return cx * cy;
}

void paint(Px& p, double cover, Px c) {
    p.y += (c.y - p.y) * cover;
    p.u += (c.u - p.u) * cover;
    p.v += (c.v - p.v) * cover;
}

using Scene = std::function<Px(double, double, std::size_t)>;

Scene akiyo(double w, double h, std::uint64_t seed) {
    return [=](double x, double y, std::size_t t) {
        const double u = x / w, v = y / h, ft = static_cast<double>(t);
        Px p{70 + 60 * u + 12 * fbm(x, y, 48, 3, seed), 124 + 8 * u, 132 - 6 * v};
        // Monitor wall behind the presenter.
        paint(p, rect(x, y, 0.05 * w, 0.08 * h, 0.35 * w, 0.45 * h),
              {150 + 20 * fbm(x, y, 24, 2, seed + 1), 140, 118});
        paint(p, rect(x, y, 0.0, 0.86 * h, w, h), {112 + 6 * fbm(x, y, 16, 2, seed + 2), 120, 136});

        const double dx = 1.5 * std::sin(ft * 0.4);
        const double hx = 0.5 * w + dx, hy = 0.42 * h;
        paint(p, ellipse(x, y, 0.5 * w, 1.05 * h, 0.30 * w, 0.36 * h),
              {45 + 10 * fbm(x, y, 12, 3, seed + 3), 138, 122});
        paint(p, ellipse(x, y, 0.5 * w + 0.3 * dx, 0.86 * h, 0.05 * w, 0.16 * h), {205, 126, 130});
        paint(p, ellipse(x, y, hx, 0.34 * h, 0.13 * w, 0.15 * h), {38 + 14 * fbm(x, y, 6, 3, seed + 4), 126, 132});
        const double rx = 0.105 * w, ry = 0.17 * h;
        const double r2 = ((x - hx) * (x - hx)) / (rx * rx) + ((y - hy) * (y - hy)) / (ry * ry);
        paint(p, ellipse(x, y, hx, hy, rx, ry), {178 - 35 * r2, 112, 152});
        for (double side : {-1.0, 1.0})
            paint(p, ellipse(x, y, hx + side * 0.04 * w, hy - 0.03 * h, 0.014 * w, 0.008 * h), {40, 128, 130});
        const double mouth = 0.006 + 0.006 * std::max(0.0, std::sin(ft * 1.3));
        paint(p, ellipse(x, y, hx, hy + 0.09 * h, 0.03 * w, mouth * h), {70, 120, 160});
        return p;
    };
}

Scene harbor(double w, double h, std::uint64_t seed) {
    return [=](double x0, double y, std::size_t t) {
        const double x = x0 + 1.5 * static_cast<double>(t);
        const double v = y / h;
        Px p{185 - 50 * v + 8 * fbm(x, y, 64, 2, seed), 136, 122};
        // Town skyline with windows.
        const long col = static_cast<long>(std::floor(x / 18));
        const double top = (0.22 + 0.12 * (lattice(col, 0, seed + 1) + 1) / 2) * h;
        if (y > top && v < 0.48) {
            const double base = 95 + 30 * lattice(col, 1, seed + 1);
            const bool window = std::fmod(x, 6.0) < 3 && std::fmod(y, 8.0) < 4 && lattice(col, 2, seed + 1) > -0.3;
            p = {window ? base + 60 : base, 126, 130};
        }
        if (v >= 0.48) {
            const double ripple = 20 * std::sin(y * 1.7 + 0.35 * x + 0.8 * static_cast<double>(t));
            p = {80 + 25 * fbm(x / 3, y, 4, 3, seed + 2) + ripple * (v - 0.4), 140, 116};
        }
        // Boats and masts.
        const double spacing = 0.2 * w;
        for (long b = static_cast<long>(std::floor((x - 60) / spacing)); b <= static_cast<long>(std::floor(x / spacing));
             ++b) {
            const double bx = static_cast<double>(b) * spacing + 25 * (lattice(b, 3, seed) + 1);
            const double by = (0.55 + 0.12 * (lattice(b, 4, seed) + 1)) * h;
            paint(p, rect(x, y, bx, by, bx + 44, by + 12), {215, 126, 128});
            paint(p, rect(x, y, bx, by + 12, bx + 44, by + 16), {50, 128, 140});
            for (int m = 0; m < 2; ++m) {
                const double mx = bx + 10 + 22 * m;
                paint(p, rect(x, y, mx, by - (0.25 + 0.1 * m) * h, mx + 1.2, by), {35, 128, 128});
            }
        }
        return p;
    };
}

Scene rhino(double w, double h, std::uint64_t seed) {
    return [=](double x, double y, std::size_t t) {
        const double v = y / h, ft = static_cast<double>(t);
        Px p{165 - 30 * v + 6 * fbm(x, y, 40, 2, seed), 140, 120};
        if (v > 0.25) p = {95 + 45 * fbm(x, y, 6, 4, seed + 1), 108, 126};
        paint(p, rect(x, y, 0, 0.25 * h - 2, w, 0.25 * h + 2), {120, 112, 128});
        const double cx = 0.45 * w + 2.0 * ft, cy = 0.56 * h;
        const double wrinkle = 18 * fbm(x - 2.0 * ft, y, 9, 3, seed + 2);
        for (int leg = 0; leg < 4; ++leg) {
            const double lx = cx - 0.17 * w + leg * 0.11 * w;
            paint(p, rect(x, y, lx, cy, lx + 0.05 * w, cy + 0.22 * h), {85 + wrinkle, 128, 128});
        }
        const double body = ellipse(x, y, cx, cy, 0.24 * w, 0.14 * h);
        const double shade = 30 * (y - cy) / (0.14 * h);
        paint(p, body, {120 - shade + wrinkle, 126, 130});
        paint(p, ellipse(x, y, cx + 0.25 * w, cy + 0.02 * h, 0.08 * w, 0.07 * h), {110 + wrinkle, 126, 130});
        // Horn.
        const double hx = x - (cx + 0.31 * w), hy = (cy - 0.05 * h) - y;
        if (hx > 0 && hy > 0 && hx < 0.05 * w && hy < 0.09 * h * (1 - hx / (0.05 * w)))
            p = {200, 124, 134};
        paint(p, ellipse(x, y, cx + 0.27 * w, cy - 0.01 * h, 0.008 * w, 0.008 * w), {25, 128, 128});
        return p;
    };
}

std::uint8_t to_sample(double s) { return static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 255L)); }

}  // namespace

const std::vector<std::string>& synthetic_scenes() {
    static const std::vector<std::string> names{"akiyo", "harbor", "rhino"};
    return names;
}

VideoSequence synthesize(const SyntheticSpec& spec) {
    const double w = static_cast<double>(spec.width), h = static_cast<double>(spec.height);
    Scene scene;
    if (spec.scene == "akiyo")
        scene = akiyo(w, h, spec.seed);
    else if (spec.scene == "harbor")
        scene = harbor(w, h, spec.seed);
    else if (spec.scene == "rhino")
        scene = rhino(w, h, spec.seed);
    else
        throw ContractError("unknown synthetic scene '" + spec.scene + "'");

    VideoSequence seq;
    seq.width = spec.width;
    seq.height = spec.height;
    for (std::size_t t = 0; t < spec.frames; ++t) {
        Frame f(spec.width, spec.height);
        for (std::size_t y = 0; y < spec.height; ++y)
            for (std::size_t x = 0; x < spec.width; ++x)
                f.y.at(x, y) = to_sample(scene(static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5, t).y);
        for (std::size_t y = 0; y < f.u.height; ++y)
            for (std::size_t x = 0; x < f.u.width; ++x) {
                const Px p = scene(2.0 * static_cast<double>(x) + 1.0, 2.0 * static_cast<double>(y) + 1.0, t);
                f.u.at(x, y) = to_sample(p.u);
                f.v.at(x, y) = to_sample(p.v);
            }
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

}  // namespace ltevid::video
