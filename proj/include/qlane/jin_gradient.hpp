#pragma once

/**
 * @file jin_gradient.hpp
 * @brief Jin's multichannel colour gradient (Di Zenzo structure terms).
 *
 * For channels g1..g3 with partial derivatives gx_i, gy_i:
 *
 *   H = sum gx_i^2,   J = sum gy_i^2,   K = sum gx_i gy_i
 *
 * The squared directional variation g(t) = H cos^2 t + 2K cos t sin t + J sin^2 t
 * peaks at
 *
 *   g_max = (H + J + sqrt((H - J)^2 + (2K)^2)) / 2
 *   t_max = sgn(K) asin(sqrt((g_max - H) / (2 g_max - H - J))),   sgn(0) = +1
 *
 * and t_max is undefined where (H - J)^2 + K^2 == 0.
 *
 * Axes: x runs along columns, y along rows, so t = 0 points right and
 * t = +pi/2 points down.
 *
 * GradientFormula::literal evaluates the operator with J and K swapped,
 * g_max = (H + K + sqrt((H-K)^2 + (2J)^2)) / 2 and
 * t_max = sgn(J) asin((g_max - H) / (2 g_max - H - K)), for comparison runs.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qlane/grid.hpp"

namespace qlane {

enum class DerivativeScheme {
    central,  ///< central differences inside, one-sided at borders
    sobel,    ///< 3x3 Sobel scaled by 1/8, replicate-edge padding
};

enum class GradientFormula { corrected, literal };

struct Derivatives {
    RealGrid dx;  ///< d/dx, along columns
    RealGrid dy;  ///< d/dy, along rows
};

struct StructureTerms {
    RealGrid h, j, k;
};

struct GradientField {
    RealGrid magnitude;
    /// Radians in [-pi/2, pi/2]; quiet NaN where the direction is undefined.
    RealGrid direction;

    [[nodiscard]] std::size_t height() const noexcept { return magnitude.height(); }
    [[nodiscard]] std::size_t width() const noexcept { return magnitude.width(); }
};

using EdgeMask = Grid<unsigned char>;

inline std::size_t count_set(const EdgeMask& m) {
    return static_cast<std::size_t>(std::count_if(m.begin(), m.end(), [](auto v) { return v != 0; }));
}

namespace detail {

inline void require_2x2(const RealGrid& g, const char* what) {
    if (g.height() < 2 || g.width() < 2) {
        throw std::invalid_argument(std::string(what) + ": grid must be at least 2x2");
    }
}

inline RealGrid sobel_pass(const RealGrid& ch, bool along_x) {
    const std::size_t rows = ch.height();
    const std::size_t cols = ch.width();
    auto at = [&](long r, long c) {
        r = std::clamp(r, 0L, static_cast<long>(rows) - 1);
        c = std::clamp(c, 0L, static_cast<long>(cols) - 1);
        return ch(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    };
    RealGrid out(rows, cols);
    for (long r = 0; r < static_cast<long>(rows); ++r) {
        for (long c = 0; c < static_cast<long>(cols); ++c) {
            double v;
            if (along_x) {
                v = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1)) -
                    (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
            } else {
                v = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1)) -
                    (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = v / 8.0;
        }
    }
    return out;
}

}  // namespace detail

inline Derivatives channel_derivatives(const RealGrid& ch,
                                       DerivativeScheme scheme = DerivativeScheme::central) {
    detail::require_2x2(ch, "channel_derivatives");
    if (scheme == DerivativeScheme::sobel) {
        return {detail::sobel_pass(ch, true), detail::sobel_pass(ch, false)};
    }
    const std::size_t rows = ch.height();
    const std::size_t cols = ch.width();
    Derivatives d{RealGrid(rows, cols), RealGrid(rows, cols)};
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c == 0) {
                d.dx(r, c) = ch(r, 1) - ch(r, 0);
            } else if (c == cols - 1) {
                d.dx(r, c) = ch(r, c) - ch(r, c - 1);
            } else {
                d.dx(r, c) = 0.5 * (ch(r, c + 1) - ch(r, c - 1));
            }
            if (r == 0) {
                d.dy(r, c) = ch(1, c) - ch(0, c);
            } else if (r == rows - 1) {
                d.dy(r, c) = ch(r, c) - ch(r - 1, c);
            } else {
                d.dy(r, c) = 0.5 * (ch(r + 1, c) - ch(r - 1, c));
            }
        }
    }
    return d;
}

inline StructureTerms structure_terms(const RealGrid& c1, const RealGrid& c2, const RealGrid& c3,
                                      DerivativeScheme scheme = DerivativeScheme::central) {
    require_same_shape(c1, c2, "structure_terms");
    require_same_shape(c1, c3, "structure_terms");
    const std::size_t rows = c1.height();
    const std::size_t cols = c1.width();
    StructureTerms t{RealGrid(rows, cols), RealGrid(rows, cols), RealGrid(rows, cols)};
    for (const RealGrid* ch : {&c1, &c2, &c3}) {
        const Derivatives d = channel_derivatives(*ch, scheme);
        for (std::size_t n = 0; n < t.h.size(); ++n) {
            const double gx = d.dx.data()[n];
            const double gy = d.dy.data()[n];
            t.h.data()[n] += gx * gx;
            t.j.data()[n] += gy * gy;
            t.k.data()[n] += gx * gy;
        }
    }
    return t;
}

/// Per-pixel (g_max, t_max) from structure terms H, J, K.
inline std::pair<double, double> max_variation(double h, double j, double k,
                                               GradientFormula formula = GradientFormula::corrected) {
    if (formula == GradientFormula::literal) std::swap(j, k);
    const double diff = h - j;
    const double disc = diff * diff + 4.0 * k * k;
    const double mag = 0.5 * (h + j + std::sqrt(disc));
    if (diff * diff + k * k == 0.0) {
        return {mag, std::numeric_limits<double>::quiet_NaN()};
    }
    const double sign = k >= 0.0 ? 1.0 : -1.0;
    const double ratio = std::clamp((mag - h) / (2.0 * mag - h - j), 0.0, 1.0);
    const double s = formula == GradientFormula::literal ? ratio : std::sqrt(ratio);
    return {mag, sign * std::asin(s)};
}

inline GradientField gradient(const RealGrid& c1, const RealGrid& c2, const RealGrid& c3,
                              DerivativeScheme scheme = DerivativeScheme::central,
                              GradientFormula formula = GradientFormula::corrected) {
    require_same_shape(c1, c2, "gradient");
    require_same_shape(c1, c3, "gradient");
    detail::require_2x2(c1, "gradient");
    const StructureTerms t = structure_terms(c1, c2, c3, scheme);
    GradientField gf{RealGrid(c1.height(), c1.width()), RealGrid(c1.height(), c1.width())};
    for (std::size_t n = 0; n < t.h.size(); ++n) {
        const auto [mag, dir] = max_variation(t.h.data()[n], t.j.data()[n], t.k.data()[n], formula);
        // The literal lettering can go negative; magnitude stays >= 0.
        gf.magnitude.data()[n] = std::max(mag, 0.0);
        gf.direction.data()[n] = dir;
    }
    return gf;
}

struct TopPercentile {
    double percent = 5.0;
};

struct FixedThreshold {
    double threshold = 0.0;
};

using ThresholdPolicy = std::variant<TopPercentile, FixedThreshold>;

/// Keeps the strongest responses. Zero-magnitude pixels are never edges.
inline EdgeMask binarize(const GradientField& gf, const ThresholdPolicy& policy = TopPercentile{}) {
    const RealGrid& mag = gf.magnitude;
    EdgeMask mask(mag.height(), mag.width(), 0);
    if (mag.empty()) return mask;

    double cut;
    if (const auto* top = std::get_if<TopPercentile>(&policy)) {
        if (!(top->percent > 0.0 && top->percent <= 100.0)) {
            throw std::invalid_argument("binarize: percentile must lie in (0, 100]");
        }
        const auto keep = static_cast<std::size_t>(
            std::ceil(top->percent / 100.0 * static_cast<double>(mag.size())));
        std::vector<double> sorted(mag.begin(), mag.end());
        const std::size_t nth = std::min(keep, sorted.size()) - 1;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(nth), sorted.end(),
                         std::greater<>());
        cut = sorted[nth];
    } else {
        cut = std::get<FixedThreshold>(policy).threshold;
    }

    for (std::size_t n = 0; n < mag.size(); ++n) {
        const double v = mag.data()[n];
        mask.data()[n] = (v > 0.0 && v >= cut) ? 1 : 0;
    }
    return mask;
}

}  // namespace qlane
