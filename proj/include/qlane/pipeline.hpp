#pragma once

/**
 * @file pipeline.hpp
 * @brief End-to-end lane detection.
 *
 * Stages, in order:
 *   decode -> quaternion encode (r i + g j + b k) -> DQFT -> multiply by H3
 *   -> inverse DQFT -> vector part -> Jin gradient -> binarize
 *   -> probabilistic Hough -> lane selection
 *
 * Every stage is also callable on its own; run() is their composition.
 */

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlane/hardy.hpp"
#include "qlane/hough.hpp"
#include "qlane/image_io.hpp"
#include "qlane/jin_gradient.hpp"
#include "qlane/qft.hpp"
#include "qlane/quaternion.hpp"

namespace qlane {

enum class Emit { edges, lines, overlay, json };

struct GradientConfig {
    DerivativeScheme scheme = DerivativeScheme::central;
    GradientFormula formula = GradientFormula::corrected;
    ThresholdPolicy threshold = TopPercentile{5.0};
};

struct PipelineConfig {
    HardyParams hardy;
    GradientConfig grad;
    HoughConfig hough;
    SlopeBand slope_band;
    std::vector<Emit> emit{Emit::json};

    void validate() const {
        hardy.validate();
        hough.validate();
        if (!(slope_band.min_abs >= 0.0 && slope_band.min_abs <= slope_band.max_abs)) {
            throw std::invalid_argument("PipelineConfig: slope band must satisfy 0 <= min <= max");
        }
    }
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct DetectionResult {
    std::string source;
    std::size_t width = 0;
    std::size_t height = 0;
    std::optional<LineSegment> left;
    std::optional<LineSegment> right;
    std::vector<LineSegment> all_segments;
    std::vector<StageTiming> timings;
    /// Binarized edge mask that fed the Hough stage.
    EdgeMask edges;
};

inline constexpr std::size_t kMinImageSide = 16;

// Individual stages.

inline QImage encode_stage(const RgbImage& img) {
    const ColorPlanes p = to_planes(img);
    return rgb_encode(p.r, p.g, p.b);
}

inline GradientField gradient_stage(const QImage& vec, const GradientConfig& cfg) {
    const ColorPlanes h = rgb_decode(vec);
    return gradient(h.r, h.g, h.b, cfg.scheme, cfg.formula);
}

namespace detail {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto operator()(const char* name, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        auto value = f();
        const auto t1 = std::chrono::steady_clock::now();
        sink_.push_back({name, std::chrono::duration<double, std::milli>(t1 - t0).count()});
        return value;
    }

private:
    std::vector<StageTiming>& sink_;
};

}  // namespace detail

/// Runs the full pipeline on an already decoded raster.
inline DetectionResult run(const RgbImage& img, const PipelineConfig& cfg, std::string source = {}) {
    cfg.validate();
    if (img.height() < kMinImageSide || img.width() < kMinImageSide) {
        throw std::invalid_argument("run: image is " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()) + ", minimum is 16x16");
    }
    DetectionResult res;
    res.source = std::move(source);
    res.width = img.width();
    res.height = img.height();
    detail::StageClock clock(res.timings);

    const QImage f = clock("encode", [&] { return encode_stage(img); });
    QSpectrum spec = clock("dqft", [&] { return dqft(f); });
    clock("hardy", [&] {
        apply_multiplier(spec, cfg.hardy);
        return 0;
    });
    const QImage fq = clock("idqft", [&] { return idqft(spec); });
    const QImage vec = clock("vector_part", [&] { return vector_part(fq); });
    const GradientField gf = clock("gradient", [&] { return gradient_stage(vec, cfg.grad); });
    res.edges = clock("binarize", [&] { return binarize(gf, cfg.grad.threshold); });
    res.all_segments = clock("hough", [&] { return detect_segments(res.edges, cfg.hough); });
    const LanePair lanes = clock("select", [&] {
        return select_lane_lines(res.all_segments, img.width(), img.height(), cfg.slope_band);
    });
    res.left = lanes.left;
    res.right = lanes.right;
    return res;
}

/// Decodes PNG/PNM bytes and runs the pipeline.
inline DetectionResult run(const Bytes& image_bytes, const PipelineConfig& cfg, std::string source = {}) {
    std::vector<StageTiming> decode_timing;
    const RgbImage img = detail::StageClock(decode_timing)("decode", [&] { return decode_image(image_bytes); });
    DetectionResult res = run(img, cfg, std::move(source));
    res.timings.insert(res.timings.begin(), decode_timing.front());
    return res;
}

// Drawing.

inline constexpr Rgb kLeftColor{255, 0, 0};
inline constexpr Rgb kRightColor{0, 255, 0};
inline constexpr Rgb kSegmentColor{255, 255, 0};

/// Pixels of the Bresenham rasterization of a segment, clipped to the image.
inline std::vector<std::pair<long, long>> rasterize(const LineSegment& s, std::size_t width,
                                                    std::size_t height) {
    std::vector<std::pair<long, long>> px;
    long x0 = std::lround(s.p0.x), y0 = std::lround(s.p0.y);
    const long x1 = std::lround(s.p1.x), y1 = std::lround(s.p1.y);
    const long dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    for (;;) {
        if (x0 >= 0 && y0 >= 0 && x0 < static_cast<long>(width) && y0 < static_cast<long>(height)) {
            px.emplace_back(x0, y0);
        }
        if (x0 == x1 && y0 == y1) break;
        const long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
    return px;
}

inline void draw_segment(RgbImage& img, const LineSegment& s, Rgb color) {
    for (const auto& [x, y] : rasterize(s, img.width(), img.height())) {
        img(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = color;
    }
}

inline void require_matching_size(const RgbImage& src, const DetectionResult& result) {
    if (src.width() != result.width || src.height() != result.height) {
        throw std::invalid_argument("overlay: result is " + std::to_string(result.width) + "x" +
                                    std::to_string(result.height) + " but source is " +
                                    std::to_string(src.width()) + "x" + std::to_string(src.height()));
    }
}

/// Source image with left/right lanes drawn in distinct colours.
inline RgbImage overlay_image(const RgbImage& src, const DetectionResult& result) {
    require_matching_size(src, result);
    RgbImage out = src;
    if (result.left) draw_segment(out, *result.left, kLeftColor);
    if (result.right) draw_segment(out, *result.right, kRightColor);
    return out;
}

/// Every detected segment, then the selected lanes on top.
inline RgbImage lines_image(const RgbImage& src, const DetectionResult& result) {
    require_matching_size(src, result);
    RgbImage out = src;
    for (const auto& s : result.all_segments) draw_segment(out, s, kSegmentColor);
    if (result.left) draw_segment(out, *result.left, kLeftColor);
    if (result.right) draw_segment(out, *result.right, kRightColor);
    return out;
}

/// PNG-encoded overlay.
inline Bytes emit_overlay(const RgbImage& src, const DetectionResult& result) {
    return encode_png(overlay_image(src, result));
}

}  // namespace qlane
