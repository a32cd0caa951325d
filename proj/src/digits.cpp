#include "pcgen/digits.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "pcgen/errors.hpp"
#include "pcgen/rng.hpp"

namespace pcgen {

namespace {

struct Pt {
    double x, y;
};
using Stroke = std::vector<Pt>; // polyline in glyph coords, [0,1]^2, y down

constexpr double kPi = 3.14159265358979323846;

Stroke arc(double cx, double cy, double rx, double ry, double deg0, double deg1, int n = 28) {
    Stroke s;
    for (int i = 0; i <= n; ++i) {
        const double a = (deg0 + (deg1 - deg0) * i / n) * kPi / 180.0;
        s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    }
    return s;
}

// stroke skeletons; tuned by eye against the MNIST glyph proportions
std::vector<Stroke> glyph(int digit) {
    switch (digit) {
        case 0: return {arc(0.50, 0.50, 0.26, 0.36, 0, 360)};
        case 1: return {{{0.38, 0.30}, {0.54, 0.14}, {0.54, 0.86}}};
        case 2:
            return {arc(0.50, 0.36, 0.23, 0.22, 180, 380),
                    {{0.71, 0.44}, {0.28, 0.84}, {0.74, 0.84}}};
        case 3:
            return {arc(0.48, 0.32, 0.21, 0.19, 150, 390),
                    arc(0.48, 0.65, 0.23, 0.21, -30, 210)};
        case 4: return {{{0.58, 0.14}, {0.26, 0.56}, {0.78, 0.56}}, {{0.62, 0.30}, {0.62, 0.88}}};
        case 5:
            return {{{0.70, 0.14}, {0.32, 0.14}, {0.30, 0.46}},
                    arc(0.48, 0.64, 0.22, 0.21, 200, 520)};
        case 6:
            return {{{0.64, 0.12}, {0.46, 0.38}, {0.35, 0.60}},
                    arc(0.50, 0.68, 0.19, 0.19, 0, 360)};
        case 7: return {{{0.26, 0.16}, {0.74, 0.16}, {0.44, 0.86}}};
        case 8:
            return {arc(0.50, 0.32, 0.18, 0.17, 0, 360), arc(0.50, 0.67, 0.21, 0.19, 0, 360)};
        case 9:
            return {arc(0.48, 0.34, 0.19, 0.19, 0, 360),
                    {{0.67, 0.34}, {0.62, 0.60}, {0.54, 0.86}}};
        default: throw ConfigError("digit out of range");
    }
}

double dist_to_segment(double px, double py, const Pt& a, const Pt& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = px - a.x, wy = py - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

IdxImages render_digit_images(int count, uint64_t seed, const DigitRenderOptions& opts) {
    constexpr int kSide = 28;
    IdxImages out;
    out.count = count;
    out.rows = kSide;
    out.cols = kSide;
    out.pixels.assign(static_cast<size_t>(count) * kSide * kSide, 0);
    Rng rng(seed);

    for (int i = 0; i < count; ++i) {
        const int digit = i % 10;
        const double rot = rng.uniform(-opts.max_rotate, opts.max_rotate);
        const double sx = rng.uniform(0.85, 1.12);
        const double sy = rng.uniform(0.85, 1.12);
        const double shear = rng.uniform(-0.12, 0.12);
        const double tx = rng.uniform(-opts.max_shift, opts.max_shift);
        const double ty = rng.uniform(-opts.max_shift, opts.max_shift);
        const double radius = rng.uniform(0.95, 1.45); // stroke half-width, px
        const double ca = std::cos(rot), sa = std::sin(rot);

        // glyph coords -> jittered pixel coords (24px glyph box, 2px margin)
        auto to_px = [&](const Pt& p) -> Pt {
            const double gx = (p.x - 0.5) * sx + shear * (p.y - 0.5);
            const double gy = (p.y - 0.5) * sy;
            const double rxp = ca * gx - sa * gy;
            const double ryp = sa * gx + ca * gy;
            return {14.0 + 24.0 * rxp + tx, 14.0 + 24.0 * ryp + ty};
        };

        std::vector<std::pair<Pt, Pt>> segs;
        for (const auto& stroke : glyph(digit))
            for (size_t k = 0; k + 1 < stroke.size(); ++k)
                segs.emplace_back(to_px(stroke[k]), to_px(stroke[k + 1]));

        uint8_t* img = out.pixels.data() + static_cast<size_t>(i) * kSide * kSide;
        for (int r = 0; r < kSide; ++r) {
            for (int c = 0; c < kSide; ++c) {
                double d = 1e9;
                for (const auto& [a, b] : segs)
                    d = std::min(d, dist_to_segment(c + 0.5, r + 0.5, a, b));
                double v = 255.0 * std::clamp(1.3 * (radius + 0.5 - d), 0.0, 1.0);
                v += rng.gaussian(0.0, opts.noise_sd);
                img[r * kSide + c] = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return out;
}

std::vector<uint8_t> digit_labels(int count) {
    std::vector<uint8_t> labels(count);
    for (int i = 0; i < count; ++i) labels[i] = static_cast<uint8_t>(i % 10);
    return labels;
}

void write_digit_dataset(const std::string& dir, int n_train, int n_test, uint64_t seed,
                         const DigitRenderOptions& opts) {
    std::filesystem::create_directories(dir);
    const auto train = render_digit_images(n_train, seed, opts);
    const auto test = render_digit_images(n_test, seed + 0x9e3779b97f4a7c15ull, opts);
    write_idx_images(dir + "/train-images-idx3-ubyte", train);
    write_idx_labels(dir + "/train-labels-idx1-ubyte", digit_labels(n_train));
    write_idx_images(dir + "/t10k-images-idx3-ubyte", test);
    write_idx_labels(dir + "/t10k-labels-idx1-ubyte", digit_labels(n_test));
}

} // namespace pcgen
