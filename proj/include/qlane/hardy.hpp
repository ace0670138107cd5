#pragma once

/**
 * @file hardy.hpp
 * @brief Quaternion analytic signal and quaternion Hardy filter.
 *
 * The Hardy filter multiplies the two-sided quaternion spectrum by the real
 * system function
 *
 *   H3(w1, w2; s1, s2) = exp(-|w1| s1) exp(-|w2| s2) [1 + sgn w1][1 + sgn w2]
 *
 * and transforms back. With s1 = s2 = 0 this is the quaternion analytic
 * signal multiplier H2 = [1 + sgn w1][1 + sgn w2]. H3 is real, so it commutes
 * with the quaternion spectrum and left/right placement does not matter.
 *
 * Discrete one-sided factor per axis (signed frequency k):
 *   k > 0  -> 2
 *   k == 0 -> 1
 *   k < 0  -> 0   (this includes the even-length Nyquist bin, whose signed
 *                  frequency is -L/2)
 * so the output spectrum is supported on w1 >= 0, w2 >= 0 only.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qlane/qft.hpp"

namespace qlane {

enum class FrequencyUnit {
    /// |w| = |k| / L, frequency in cycles per pixel.
    cycles_per_pixel,
    /// |w| = 2 pi |k| / L, angular frequency in radians per pixel.
    angular_normalized,
    /// |w| = |k|, the bare signed index.
    raw_index,
};

struct HardyParams {
    double s1 = 3.0;
    double s2 = 20.0;
    FrequencyUnit freq_unit = FrequencyUnit::cycles_per_pixel;

    void validate() const {
        if (!(s1 >= 0.0) || !(s2 >= 0.0)) {
            throw std::invalid_argument("HardyParams: s1 and s2 must be non-negative");
        }
    }
};

struct FilteredImage {
    QImage fq;
};

/// [1 + sgn(k)] with the discrete DC rule.
constexpr double one_sided_factor(long k) noexcept {
    return k > 0 ? 2.0 : (k == 0 ? 1.0 : 0.0);
}

inline double frequency_magnitude(long k, std::size_t len, FrequencyUnit unit) noexcept {
    const double mag = static_cast<double>(k < 0 ? -k : k);
    switch (unit) {
    case FrequencyUnit::raw_index:
        return mag;
    case FrequencyUnit::angular_normalized:
        return 2.0 * std::numbers::pi * mag / static_cast<double>(len);
    case FrequencyUnit::cycles_per_pixel:
        break;
    }
    return mag / static_cast<double>(len);
}

/// H3 at signed frequencies (w1, w2) on an M x N grid (M rows, N columns).
inline double h3_multiplier(long w1, long w2, const HardyParams& p, std::size_t rows,
                            std::size_t cols) {
    const double f1 = one_sided_factor(w1);
    const double f2 = one_sided_factor(w2);
    if (f1 == 0.0 || f2 == 0.0) return 0.0;
    double gain = f1 * f2;
    if (p.s1 != 0.0) gain *= std::exp(-frequency_magnitude(w1, rows, p.freq_unit) * p.s1);
    if (p.s2 != 0.0) gain *= std::exp(-frequency_magnitude(w2, cols, p.freq_unit) * p.s2);
    return gain;
}

/// Multiplies a spectrum in place by H3.
inline void apply_multiplier(QSpectrum& spec, const HardyParams& p) {
    const std::size_t rows = spec.height();
    const std::size_t cols = spec.width();
    std::vector<double> col_gain(cols);
    for (std::size_t k2 = 0; k2 < cols; ++k2) {
        col_gain[k2] = h3_multiplier(0, spec.col_frequency(k2), p, rows, cols);
    }
    for (std::size_t k1 = 0; k1 < rows; ++k1) {
        const double row_gain = h3_multiplier(spec.row_frequency(k1), 0, p, rows, cols);
        for (std::size_t k2 = 0; k2 < cols; ++k2) {
            // H3 is separable and each axis factor is 1 at DC.
            spec(k1, k2) *= row_gain * col_gain[k2];
        }
    }
}

inline FilteredImage apply_hardy_filter(const QImage& img, const HardyParams& p) {
    if (img.empty()) throw std::invalid_argument("apply_hardy_filter: empty image");
    p.validate();
    QSpectrum spec = dqft(img);
    apply_multiplier(spec, p);
    return {idqft(spec)};
}

inline FilteredImage quaternion_analytic_signal(const QImage& img) {
    if (img.empty()) return {};
    return apply_hardy_filter(img, HardyParams{0.0, 0.0});
}

}  // namespace qlane
