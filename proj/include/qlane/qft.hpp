#pragma once

/**
 * @file qft.hpp
 * @brief Two-sided discrete quaternion Fourier transform.
 *
 * For an M x N quaternion image f (M rows indexed by x1, N columns by x2):
 *
 *   forward  F(w1,w2) = sum_{x1,x2} exp(-i 2pi w1 x1/M) f(x1,x2) exp(-j 2pi w2 x2/N)
 *   inverse  f(x1,x2) = 1/(MN) sum_{w1,w2} exp(+i 2pi w1 x1/M) F(w1,w2) exp(+j 2pi w2 x2/N)
 *
 * The forward sum is unnormalized and the inverse carries the full 1/(MN),
 * so idqft(dqft(f)) == f.
 *
 * Spectra are stored in natural DFT order. Storage index k on an axis of
 * length L maps to the signed frequency k if k < ceil(L/2), else k - L.
 *
 * Fast path: write q = A + B j with A = w + x i and B = y + z i (both
 * complex in the unit i). Left multiplication by exp(-i a) acts on A and B
 * as complex scalars, and right multiplication by exp(-j b) mixes them
 * with real cos/sin weights. Both mixings reduce to two ordinary 2D complex
 * DFTs evaluated at (w1, w2) and (w1, -w2):
 *
 *   P = (A+ + A-)/2 + i (B+ - B-)/2
 *   Q = (B+ + B-)/2 - i (A+ - A-)/2,      F = P + Q j
 *
 * where X+ = DFT[X](w1, w2) and X- = DFT[X](w1, -w2). The inverse has the
 * same recombination with inverse DFTs.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qlane/fft.hpp"
#include "qlane/quaternion.hpp"

namespace qlane {

/// Frequency-domain quaternion grid (natural DFT order).
class QSpectrum {
public:
    QSpectrum() = default;
    QSpectrum(std::size_t height, std::size_t width) : grid_(height, width) {}
    explicit QSpectrum(Grid<Quat> grid) : grid_(std::move(grid)) {}

    [[nodiscard]] std::size_t height() const noexcept { return grid_.height(); }
    [[nodiscard]] std::size_t width() const noexcept { return grid_.width(); }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

    Quat& operator()(std::size_t k1, std::size_t k2) noexcept { return grid_(k1, k2); }
    const Quat& operator()(std::size_t k1, std::size_t k2) const noexcept {
        return grid_(k1, k2);
    }

    [[nodiscard]] const Grid<Quat>& grid() const noexcept { return grid_; }
    Grid<Quat>& grid() noexcept { return grid_; }

    /// Signed frequency of storage index k on an axis of length len.
    static constexpr long signed_frequency(std::size_t k, std::size_t len) noexcept {
        const std::size_t half_up = (len + 1) / 2;
        return k < half_up ? static_cast<long>(k)
                           : static_cast<long>(k) - static_cast<long>(len);
    }
    [[nodiscard]] long row_frequency(std::size_t k1) const noexcept {
        return signed_frequency(k1, height());
    }
    [[nodiscard]] long col_frequency(std::size_t k2) const noexcept {
        return signed_frequency(k2, width());
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto& q : grid_) m = std::fmax(m, q.norm());
        return m;
    }

private:
    Grid<Quat> grid_;
};

namespace detail {

inline QImage split_recombine(const Grid<Quat>& in, fft::Direction dir) {
    using fft::cplx;
    const std::size_t rows = in.height();
    const std::size_t cols = in.width();
    Grid<cplx> a(rows, cols), b(rows, cols);
    for (std::size_t n = 0; n < in.size(); ++n) {
        const Quat& q = in.data()[n];
        a.data()[n] = {q.w, q.x};
        b.data()[n] = {q.y, q.z};
    }
    fft::transform2d(a, dir);
    fft::transform2d(b, dir);

    const cplx iu{0.0, 1.0};
    QImage out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t cm = (cols - c) % cols;
            const cplx ap = a(r, c), am = a(r, cm);
            const cplx bp = b(r, c), bm = b(r, cm);
            const cplx p = 0.5 * (ap + am) + 0.5 * iu * (bp - bm);
            const cplx q = 0.5 * (bp + bm) - 0.5 * iu * (ap - am);
            out(r, c) = Quat{p.real(), p.imag(), q.real(), q.imag()};
        }
    }
    return out;
}

// Left factor exp(sign * i * t) and right factor exp(sign * j * t) as quaternions.
inline Quat exp_i(double t) { return {std::cos(t), std::sin(t), 0.0, 0.0}; }
inline Quat exp_j(double t) { return {std::cos(t), 0.0, std::sin(t), 0.0}; }

inline Grid<Quat> direct_sum(const Grid<Quat>& in, double sign) {
    const std::size_t rows = in.height();
    const std::size_t cols = in.width();
    Grid<Quat> out(rows, cols);
    for (std::size_t u1 = 0; u1 < rows; ++u1) {
        for (std::size_t u2 = 0; u2 < cols; ++u2) {
            Quat acc{};
            for (std::size_t x1 = 0; x1 < rows; ++x1) {
                const double t1 = sign * 2.0 * std::numbers::pi *
                                  static_cast<double>((u1 * x1) % rows) / static_cast<double>(rows);
                const Quat left = exp_i(t1);
                for (std::size_t x2 = 0; x2 < cols; ++x2) {
                    const double t2 = sign * 2.0 * std::numbers::pi *
                                      static_cast<double>((u2 * x2) % cols) /
                                      static_cast<double>(cols);
                    acc += left * in(x1, x2) * exp_j(t2);
                }
            }
            out(u1, u2) = acc;
        }
    }
    return out;
}

inline constexpr std::size_t kOracleMaxPixels = 4096;

inline void check_oracle_size(std::size_t rows, std::size_t cols) {
    if (rows * cols > kOracleMaxPixels) {
        throw std::invalid_argument("dqft oracle: " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " exceeds " +
                                    std::to_string(kOracleMaxPixels) + " pixels");
    }
}

}  // namespace detail

inline QSpectrum dqft(const QImage& img) {
    if (img.empty()) throw std::invalid_argument("dqft: empty image");
    return QSpectrum(detail::split_recombine(img, fft::Direction::forward));
}

inline QImage idqft(const QSpectrum& spec) {
    if (spec.size() == 0) return {};
    QImage out = detail::split_recombine(spec.grid(), fft::Direction::inverse);
    const double scale = 1.0 / static_cast<double>(spec.size());
    for (auto& q : out) q *= scale;
    return out;
}

/// Literal O(M^2 N^2) evaluation of the forward sum. Test reference only;
/// rejects grids above 4096 pixels.
inline QSpectrum dqft_oracle(const QImage& img) {
    detail::check_oracle_size(img.height(), img.width());
    return QSpectrum(detail::direct_sum(img, -1.0));
}

/// Literal evaluation of the inverse sum, including the 1/(MN) factor.
inline QImage idqft_oracle(const QSpectrum& spec) {
    detail::check_oracle_size(spec.height(), spec.width());
    QImage out = detail::direct_sum(spec.grid(), +1.0);
    const double scale = 1.0 / static_cast<double>(spec.size());
    for (auto& q : out) q *= scale;
    return out;
}

inline double max_abs_difference(const QSpectrum& a, const QSpectrum& b) {
    return max_abs_difference(a.grid(), b.grid());
}

}  // namespace qlane
