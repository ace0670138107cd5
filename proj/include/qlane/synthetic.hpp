#pragma once

// Synthetic road scenes with known lane geometry, for testing and demos.
// Noise is drawn with a hand-rolled Box-Muller on mt19937_64 so a seed gives
// the same image on every standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qlane/evaluation.hpp"
#include "qlane/image_io.hpp"

namespace qlane::synthetic {

class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (cached_) {
            cached_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        cached_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool cached_ = false;
};

struct SceneParams {
    std::size_t width = 256;
    std::size_t height = 256;
    /// Where the lane centrelines would meet.
    Point2 vanishing{128.0, 96.0};
    /// Centreline x positions on the bottom row.
    double left_bottom_x = 40.0;
    double right_bottom_x = 216.0;
    /// Painted marks stop at this row; above it is sky.
    double horizon_y = 110.0;
    /// Marking width in pixels.
    double mark_width = 6.0;
    Rgb ground{60, 60, 64};
    Rgb sky{60, 60, 64};
    Rgb left_mark{235, 200, 40};   // yellow
    Rgb right_mark{240, 240, 240}; // white
    double noise_sigma = 15.0;
    std::uint64_t seed = 1;
};

struct RoadScene {
    RgbImage image;
    /// Left and right marking centrelines, bottom row to horizon.
    std::vector<TruthLine> lanes;
};

inline double distance_to_line(Point2 p, Point2 a, Point2 b) { return point_line_distance(p, a, b); }

inline RoadScene make_road_scene(const SceneParams& sp) {
    RoadScene scene;
    const double bottom = static_cast<double>(sp.height - 1);
    auto centreline = [&](double bottom_x) {
        const Point2 b{bottom_x, bottom};
        const double t = (bottom - sp.horizon_y) / (bottom - sp.vanishing.y);
        const Point2 top{bottom_x + t * (sp.vanishing.x - bottom_x), sp.horizon_y};
        return TruthLine{b, top};
    };
    scene.lanes = {centreline(sp.left_bottom_x), centreline(sp.right_bottom_x)};

    GaussianNoise noise(sp.seed);
    RgbImage img(sp.height, sp.width);
    auto clamp8 = [](double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); };
    for (std::size_t y = 0; y < sp.height; ++y) {
        for (std::size_t x = 0; x < sp.width; ++x) {
            const Point2 p{static_cast<double>(x), static_cast<double>(y)};
            Rgb base = p.y < sp.horizon_y ? sp.sky : sp.ground;
            if (p.y >= sp.horizon_y) {
                if (distance_to_line(p, scene.lanes[0].p0, scene.lanes[0].p1) <= 0.5 * sp.mark_width) {
                    base = sp.left_mark;
                } else if (distance_to_line(p, scene.lanes[1].p0, scene.lanes[1].p1) <= 0.5 * sp.mark_width) {
                    base = sp.right_mark;
                }
            }
            const double n = sp.noise_sigma;
            img(y, x) = {clamp8(base.r + n * noise()), clamp8(base.g + n * noise()),
                         clamp8(base.b + n * noise())};
        }
    }
    scene.image = std::move(img);
    return scene;
}

/// Scene i of a varied suite: lane spread, vanishing point and noise level
/// (0..max_sigma) change with i; seed makes it reproducible.
inline SceneParams suite_scene(std::size_t i, std::size_t count, double max_sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 1000003ULL + i);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    SceneParams sp;
    sp.vanishing = {118.0 + 20.0 * unit(), 88.0 + 16.0 * unit()};
    sp.left_bottom_x = 20.0 + 40.0 * unit();
    sp.right_bottom_x = 196.0 + 40.0 * unit();
    sp.mark_width = 5.0 + 3.0 * unit();
    sp.noise_sigma = count > 1 ? max_sigma * static_cast<double>(i) / static_cast<double>(count - 1) : max_sigma;
    sp.seed = seed + i;
    return sp;
}

}  // namespace qlane::synthetic
