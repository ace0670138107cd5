#pragma once

/**
 * @file hough.hpp
 * @brief rho-theta Hough transform, probabilistic segment extraction and
 *        slope-constrained lane selection.
 *
 * Image coordinates: x is the column, y is the row (growing downwards), the
 * origin is the top-left pixel centre. A line is
 *
 *     rho = x cos(theta) + y sin(theta),    theta in [0, pi)
 *
 * theta is the angle of the line normal from the +x axis, which is also the
 * angle between the line itself and the y axis:
 *
 *        +------> x
 *        |\  theta
 *        | \
 *        |  \  <- normal, length |rho|
 *        v
 *        y
 *
 * A vertical line x = c has theta = 0, rho = c. A horizontal line y = c has
 * theta = pi/2, rho = c. Keeping theta in [0, pi) makes rho signed, using
 * rho(theta + pi) = -rho(theta) to fold the other half-turn.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlane/jin_gradient.hpp"

namespace qlane {

struct HoughConfig {
    double rho_res = 1.0;                          ///< pixels per rho bin
    double theta_res = std::numbers::pi / 180.0;   ///< radians per theta bin
    int vote_threshold = 50;
    double min_len = 50.0;                         ///< pixels
    double max_gap = 10.0;                         ///< pixels
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(rho_res > 0.0)) throw std::invalid_argument("HoughConfig: rho_res must be > 0");
        if (!(theta_res > 0.0 && theta_res <= std::numbers::pi / 2)) {
            throw std::invalid_argument("HoughConfig: theta_res must lie in (0, pi/2]");
        }
        if (vote_threshold < 1) throw std::invalid_argument("HoughConfig: vote_threshold must be >= 1");
        if (!(min_len >= 0.0)) throw std::invalid_argument("HoughConfig: min_len must be >= 0");
        if (!(max_gap >= 0.0)) throw std::invalid_argument("HoughConfig: max_gap must be >= 0");
    }
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct LineSegment {
    Point2 p0, p1;
    double rho = 0.0;
    double theta = 0.0;
    int votes = 0;

    [[nodiscard]] double length() const { return distance(p0, p1); }

    /// dy/dx in image coordinates; +-inf for vertical segments.
    [[nodiscard]] double slope() const {
        const double dx = p1.x - p0.x;
        const double dy = p1.y - p0.y;
        if (dx == 0.0) return dy >= 0.0 ? INFINITY : -INFINITY;
        return dy / dx;
    }

    /// Signed distance of p from the infinite (rho, theta) line.
    [[nodiscard]] double residual(Point2 p) const {
        return p.x * std::cos(theta) + p.y * std::sin(theta) - rho;
    }

    bool operator==(const LineSegment&) const = default;
};

/// (rho, theta) of the infinite line through two points, theta in [0, pi).
inline std::pair<double, double> line_through(Point2 a, Point2 b) {
    const double len = distance(a, b);
    if (len == 0.0) return {a.x, 0.0};
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;
    double theta = std::atan2(-ux, uy);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    const double rho = a.x * std::cos(theta) + a.y * std::sin(theta);
    return {rho, theta};
}

/// Vote grid over (rho, theta). Bin n samples theta = n * theta_res; bin m
/// holds rho in [(m - offset - 1/2) rho_res, (m - offset + 1/2) rho_res).
class Accumulator {
public:
    Accumulator(std::size_t img_height, std::size_t img_width, const HoughConfig& cfg)
        : rho_res_(cfg.rho_res), theta_res_(cfg.theta_res) {
        const double diag = std::hypot(static_cast<double>(img_width), static_cast<double>(img_height));
        offset_ = static_cast<long>(std::ceil(diag / rho_res_));
        n_rho_ = static_cast<std::size_t>(2 * offset_ + 1);
        n_theta_ = static_cast<std::size_t>(std::ceil(std::numbers::pi / theta_res_ - 1e-9));
        cos_.resize(n_theta_);
        sin_.resize(n_theta_);
        for (std::size_t n = 0; n < n_theta_; ++n) {
            cos_[n] = std::cos(theta(n));
            sin_[n] = std::sin(theta(n));
        }
        bins_ = Grid<int>(n_theta_, n_rho_, 0);
    }

    [[nodiscard]] std::size_t theta_bins() const noexcept { return n_theta_; }
    [[nodiscard]] std::size_t rho_bins() const noexcept { return n_rho_; }
    [[nodiscard]] double theta(std::size_t n) const noexcept {
        return static_cast<double>(n) * theta_res_;
    }
    [[nodiscard]] double rho(std::size_t m) const noexcept {
        return static_cast<double>(static_cast<long>(m) - offset_) * rho_res_;
    }
    [[nodiscard]] std::size_t rho_bin(double x, double y, std::size_t n) const noexcept {
        const double r = x * cos_[n] + y * sin_[n];
        return static_cast<std::size_t>(std::lround(r / rho_res_) + offset_);
    }

    /// Votes of bin (theta index n, rho index m).
    [[nodiscard]] int at(std::size_t n, std::size_t m) const noexcept { return bins_(n, m); }
    int& at(std::size_t n, std::size_t m) noexcept { return bins_(n, m); }

    [[nodiscard]] long long total() const {
        long long t = 0;
        for (int v : bins_) t += v;
        return t;
    }

    struct Peak {
        std::size_t theta_bin = 0;
        std::size_t rho_bin = 0;
        double theta = 0.0;
        double rho = 0.0;
        int votes = 0;
    };

    /// Global maximum; ties resolve to the first bin in (theta, rho) order.
    [[nodiscard]] Peak peak() const {
        Peak best;
        for (std::size_t n = 0; n < n_theta_; ++n) {
            for (std::size_t m = 0; m < n_rho_; ++m) {
                if (bins_(n, m) > best.votes) {
                    best = {n, m, theta(n), rho(m), bins_(n, m)};
                }
            }
        }
        return best;
    }

private:
    double rho_res_;
    double theta_res_;
    long offset_ = 0;
    std::size_t n_rho_ = 0;
    std::size_t n_theta_ = 0;
    std::vector<double> cos_, sin_;
    Grid<int> bins_;
};

inline Accumulator vote(const EdgeMask& mask, const HoughConfig& cfg = {}) {
    cfg.validate();
    if (mask.empty()) throw std::invalid_argument("vote: empty mask grid");
    Accumulator acc(mask.height(), mask.width(), cfg);
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            if (!mask(y, x)) continue;
            for (std::size_t n = 0; n < acc.theta_bins(); ++n) {
                ++acc.at(n, acc.rho_bin(static_cast<double>(x), static_cast<double>(y), n));
            }
        }
    }
    return acc;
}

namespace detail {

struct Pixel {
    long x, y;
};

// Steps from `start` along unit direction (ux, uy), one pixel per step on
// the major axis, and calls visit(pixel) for the nearest pixel and its
// neighbours up to `reach` pixels away across the minor axis. visit returns
// true when it found ink. Stops after more than max_gap consecutive empty
// steps or at the border.
template <typename Visit>
void walk_line(Point2 start, double ux, double uy, std::size_t rows, std::size_t cols,
               double max_steps, double max_gap, long reach, Visit&& visit) {
    const bool x_major = std::abs(ux) >= std::abs(uy);
    const double major = x_major ? std::abs(ux) : std::abs(uy);
    if (major == 0.0) return;
    const double sx = ux / major;
    const double sy = uy / major;
    long gap = 0;
    for (long t = 0; static_cast<double>(t) <= max_steps; ++t) {
        const double px = start.x + sx * static_cast<double>(t);
        const double py = start.y + sy * static_cast<double>(t);
        const long rx = std::lround(px);
        const long ry = std::lround(py);
        if (rx < 0 || ry < 0 || rx >= static_cast<long>(cols) || ry >= static_cast<long>(rows)) break;
        bool hit = false;
        for (long i = 0; i <= 2 * reach; ++i) {
            const long o = (i % 2 == 0) ? i / 2 : -(i + 1) / 2;
            const Pixel p = x_major ? Pixel{rx, ry + o} : Pixel{rx + o, ry};
            if (p.x < 0 || p.y < 0 || p.x >= static_cast<long>(cols) ||
                p.y >= static_cast<long>(rows)) {
                continue;
            }
            hit = visit(p) || hit;
        }
        if (hit) {
            gap = 0;
        } else if (static_cast<double>(++gap) > max_gap) {
            break;
        }
    }
}


struct SegmentFit {
    Point2 p0, p1;
    double rho = 0.0;
    double theta = 0.0;
    double length = 0.0;
};

// Total least-squares line through the pixels, endpoints at the extreme
// projections. Falls back to `theta` for a single pixel.
inline SegmentFit fit_segment(const std::vector<Pixel>& px, double theta) {
    SegmentFit f;
    if (px.empty()) return f;
    double mx = 0.0, my = 0.0;
    for (const auto& p : px) {
        mx += static_cast<double>(p.x);
        my += static_cast<double>(p.y);
    }
    mx /= static_cast<double>(px.size());
    my /= static_cast<double>(px.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : px) {
        const double dx = static_cast<double>(p.x) - mx;
        const double dy = static_cast<double>(p.y) - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    double ux = -std::sin(theta), uy = std::cos(theta);
    if (sxx + syy > 0.0) {
        // Principal axis of the scatter matrix.
        const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        ux = std::cos(phi);
        uy = std::sin(phi);
    }
    double tmin = 0.0, tmax = 0.0;
    for (const auto& p : px) {
        const double t = (static_cast<double>(p.x) - mx) * ux + (static_cast<double>(p.y) - my) * uy;
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    f.p0 = {mx + tmin * ux, my + tmin * uy};
    f.p1 = {mx + tmax * ux, my + tmax * uy};
    f.length = tmax - tmin;
    if (f.length > 0.0) {
        std::tie(f.rho, f.theta) = line_through(f.p0, f.p1);
    } else {
        f.theta = theta;
        f.rho = mx * std::cos(theta) + my * std::sin(theta);
    }
    return f;
}

}  // namespace detail

/**
 * Probabilistic Hough: pixels are visited in a seeded random order and vote
 * one at a time. When the strongest bin touched by the current pixel reaches
 * vote_threshold, the line through that pixel is followed both ways, bridging
 * runs of up to max_gap empty steps. Pixels on the followed line leave the
 * mask, and if the line is long enough their votes are withdrawn and a
 * segment is emitted. Emitted segments are refit by total least squares to
 * the pixels they claimed; (rho, theta) describe that fit exactly.
 */
inline std::vector<LineSegment> detect_segments(const EdgeMask& mask, const HoughConfig& cfg = {}) {
    cfg.validate();
    std::vector<LineSegment> out;
    if (mask.empty()) return out;
    const std::size_t rows = mask.height();
    const std::size_t cols = mask.width();

    std::vector<detail::Pixel> points;
    for (std::size_t y = 0; y < rows; ++y) {
        for (std::size_t x = 0; x < cols; ++x) {
            if (mask(y, x)) points.push_back({static_cast<long>(x), static_cast<long>(y)});
        }
    }
    if (points.empty()) return out;

    // Fisher-Yates on raw mt19937_64 output; std::shuffle and the standard
    // distributions are not reproducible across library implementations.
    std::mt19937_64 rng(cfg.rng_seed);
    for (std::size_t i = points.size() - 1; i > 0; --i) {
        std::swap(points[i], points[static_cast<std::size_t>(rng() % (i + 1))]);
    }

    Accumulator acc(rows, cols, cfg);
    EdgeMask live = mask;
    EdgeMask voted(rows, cols, 0);
    const double max_steps = static_cast<double>(rows + cols);

    auto unvote = [&](long x, long y) {
        for (std::size_t n = 0; n < acc.theta_bins(); ++n) {
            --acc.at(n, acc.rho_bin(static_cast<double>(x), static_cast<double>(y), n));
        }
    };

    for (const auto& pt : points) {
        if (!live(pt.y, pt.x)) continue;

        int best_votes = 0;
        std::size_t best_n = 0;
        for (std::size_t n = 0; n < acc.theta_bins(); ++n) {
            int& bin = acc.at(n, acc.rho_bin(static_cast<double>(pt.x), static_cast<double>(pt.y), n));
            ++bin;
            if (bin > best_votes) {
                best_votes = bin;
                best_n = n;
            }
        }
        voted(pt.y, pt.x) = 1;
        if (best_votes < cfg.vote_threshold) continue;

        const double theta = acc.theta(best_n);
        const Point2 seed{static_cast<double>(pt.x), static_cast<double>(pt.y)};

        // Follow the line both ways from `origin` and collect the live pixels
        // it passes, ordered by position along (ux, uy).
        auto probe = [&](Point2 origin, double ux, double uy) {
            std::vector<std::pair<double, detail::Pixel>> hits;
            for (const double dir : {-1.0, 1.0}) {
                detail::walk_line(origin, dir * ux, dir * uy, rows, cols, max_steps, cfg.max_gap, 1,
                                  [&](detail::Pixel p) {
                                      if (!live(p.y, p.x)) return false;
                                      const double along = (static_cast<double>(p.x) - origin.x) * ux +
                                                           (static_cast<double>(p.y) - origin.y) * uy;
                                      hits.emplace_back(along, p);
                                      return true;
                                  });
            }
            std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            return hits;
        };

        // The winning bin's angle is only good to theta_res, which drifts off
        // long lines. Re-aim along the pixels found so far until the hit set
        // stops growing.
        Point2 origin = seed;
        double ux = -std::sin(theta);
        double uy = std::cos(theta);
        auto hits = probe(origin, ux, uy);
        for (int pass = 0; pass < 3 && hits.size() >= 2; ++pass) {
            std::vector<detail::Pixel> px;
            px.reserve(hits.size());
            for (const auto& h : hits) px.push_back(h.second);
            const auto fit = detail::fit_segment(px, theta);
            if (fit.length == 0.0) break;
            const double nx = (fit.p1.x - fit.p0.x) / fit.length;
            const double ny = (fit.p1.y - fit.p0.y) / fit.length;
            const double t = (seed.x - fit.p0.x) * nx + (seed.y - fit.p0.y) * ny;
            const Point2 next_origin{fit.p0.x + t * nx, fit.p0.y + t * ny};
            auto next = probe(next_origin, nx, ny);
            if (next.size() <= hits.size()) break;
            origin = next_origin;
            ux = nx;
            uy = ny;
            hits = std::move(next);
        }

        Point2 ends[2] = {seed, seed};
        if (!hits.empty()) {
            const auto& lo = hits.front().second;
            const auto& hi = hits.back().second;
            ends[0] = {static_cast<double>(lo.x), static_cast<double>(lo.y)};
            ends[1] = {static_cast<double>(hi.x), static_cast<double>(hi.y)};
        }

        const double walk_len = distance(ends[0], ends[1]);

        // Claim the pixels along the line between the extremes.
        double cx = ux, cy = uy;
        if (walk_len > 0.0) {
            cx = (ends[1].x - ends[0].x) / walk_len;
            cy = (ends[1].y - ends[0].y) / walk_len;
        }
        const double steps = std::max(std::abs(ends[1].x - ends[0].x), std::abs(ends[1].y - ends[0].y));
        std::vector<detail::Pixel> claimed;
        detail::walk_line(ends[0], cx, cy, rows, cols, steps, max_steps, 1, [&](detail::Pixel p) {
            if (!live(p.y, p.x)) return false;
            live(p.y, p.x) = 0;
            claimed.push_back(p);
            return true;
        });
        if (live(pt.y, pt.x)) {
            live(pt.y, pt.x) = 0;
            claimed.push_back(pt);
        }

        const auto fit = detail::fit_segment(claimed, theta);
        const bool good = fit.length >= cfg.min_len;
        if (!good) continue;
        for (const auto& p : claimed) {
            if (voted(p.y, p.x)) {
                unvote(p.x, p.y);
                voted(p.y, p.x) = 0;
            }
        }
        out.push_back({fit.p0, fit.p1, fit.rho, fit.theta, best_votes});
    }
    return out;
}

struct SlopeBand {
    double min_abs = 0.36397023426620234;  // tan 20 deg
    double max_abs = 5.671281819617709;    // tan 80 deg
};

struct LanePair {
    std::optional<LineSegment> left;
    std::optional<LineSegment> right;
};

/// x where the segment's extension meets the row y = bottom_y.
inline double bottom_crossing(const LineSegment& s, double bottom_y) {
    const double k = s.slope();
    return s.p0.x + (bottom_y - s.p0.y) / k;
}

/**
 * Picks the inside lane boundaries. Segments with |slope| outside the band
 * are dropped. The left lane is the negative-slope survivor whose extension
 * meets the bottom row left of centre and closest to it; the right lane is
 * the positive-slope mirror image. Slopes are in image coordinates, so a
 * left boundary rising toward the horizon has negative slope.
 */
inline LanePair select_lane_lines(const std::vector<LineSegment>& segs, std::size_t img_width,
                                  std::size_t img_height, SlopeBand band = {}) {
    LanePair out;
    const double centre = 0.5 * static_cast<double>(img_width - (img_width > 0 ? 1 : 0));
    const double bottom = static_cast<double>(img_height > 0 ? img_height - 1 : 0);
    double best_left = -INFINITY;
    double best_right = INFINITY;
    for (const auto& s : segs) {
        if (s.length() == 0.0) continue;
        const double k = s.slope();
        const double ak = std::abs(k);
        if (!(ak >= band.min_abs && ak <= band.max_abs)) continue;
        const double xb = bottom_crossing(s, bottom);
        if (k < 0.0 && xb < centre && xb > best_left) {
            best_left = xb;
            out.left = s;
        } else if (k > 0.0 && xb > centre && xb < best_right) {
            best_right = xb;
            out.right = s;
        }
    }
    return out;
}

}  // namespace qlane
