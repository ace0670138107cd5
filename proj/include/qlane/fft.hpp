#pragma once

// Complex FFT used as the building block of the quaternion transform.
// Power-of-two lengths use an iterative radix-2 kernel; every other length
// goes through Bluestein's chirp-z reformulation on a padded power of two.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qlane/grid.hpp"

namespace qlane::fft {

using cplx = std::complex<double>;

enum class Direction { forward, inverse };

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place unnormalized radix-2; sign -1 forward, +1 inverse.
inline void radix2(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles computed directly rather than by repeated multiplication
        // to keep rounding error flat in the transform length.
        std::vector<cplx> tw(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(len);
            tw[k] = {std::cos(ang), std::sin(ang)};
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * tw[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

// exp(sign * i * pi * k^2 / n), with k^2 reduced mod 2n to keep the angle small.
inline cplx chirp(std::size_t k, std::size_t n, int sign) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

inline void bluestein(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<cplx> u(m), v(m);
    for (std::size_t k = 0; k < n; ++k) {
        u[k] = a[k] * chirp(k, n, sign);
    }
    v[0] = chirp(0, n, -sign);
    for (std::size_t k = 1; k < n; ++k) {
        v[k] = v[m - k] = chirp(k, n, -sign);
    }
    radix2(u, -1);
    radix2(v, -1);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    radix2(u, +1);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = u[k] * scale * chirp(k, n, sign);
    }
}

}  // namespace detail

/// Unnormalized 1D DFT in place: X[k] = sum_n x[n] exp(-+ 2 pi i k n / N).
/// Neither direction applies a 1/N factor.
inline void transform(std::span<cplx> a, Direction dir) {
    const int sign = dir == Direction::forward ? -1 : +1;
    if (a.size() <= 1) return;
    if (detail::is_pow2(a.size())) {
        detail::radix2(a, sign);
    } else {
        detail::bluestein(a, sign);
    }
}

/// Unnormalized separable 2D DFT in place over a row-major grid.
inline void transform2d(Grid<cplx>& g, Direction dir) {
    for (std::size_t r = 0; r < g.height(); ++r) {
        transform(g.row(r), dir);
    }
    std::vector<cplx> col(g.height());
    for (std::size_t c = 0; c < g.width(); ++c) {
        for (std::size_t r = 0; r < g.height(); ++r) col[r] = g(r, c);
        transform(col, dir);
        for (std::size_t r = 0; r < g.height(); ++r) g(r, c) = col[r];
    }
}

}  // namespace qlane::fft
