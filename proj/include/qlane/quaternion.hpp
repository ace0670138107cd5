#pragma once

/**
 * @file quaternion.hpp
 * @brief Hamilton quaternions and quaternion-valued images.
 *
 * q = w + x i + y j + z k with i² = j² = k² = ijk = -1. Multiplication is
 * associative but not commutative: i j = k = -j i.
 *
 * A colour image embeds as a pure quaternion field
 *   f(x1, x2) = R(x1, x2) i + G(x1, x2) j + B(x1, x2) k.
 */

#include <cmath>
#include <tuple>

#include "qlane/grid.hpp"

namespace qlane {

template <typename T = double>
struct Quaternion {
    T w{}, x{}, y{}, z{};

    constexpr Quaternion() = default;
    constexpr Quaternion(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}
    constexpr explicit Quaternion(T scalar) : w(scalar) {}

    static constexpr Quaternion one() { return {T(1), T(0), T(0), T(0)}; }
    static constexpr Quaternion i() { return {T(0), T(1), T(0), T(0)}; }
    static constexpr Quaternion j() { return {T(0), T(0), T(1), T(0)}; }
    static constexpr Quaternion k() { return {T(0), T(0), T(0), T(1)}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator+(const Quaternion& o) const {
        return {w + o.w, x + o.x, y + o.y, z + o.z};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {w - o.w, x - o.x, y - o.y, z - o.z};
    }
    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    // Hamilton product.
    constexpr Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    // Real scalars are central, so left and right scaling agree.
    constexpr Quaternion operator*(T s) const { return {w * s, x * s, y * s, z * s}; }
    friend constexpr Quaternion operator*(T s, const Quaternion& q) { return q * s; }
    constexpr Quaternion operator/(T s) const { return {w / s, x / s, y / s, z / s}; }

    constexpr Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
    constexpr Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }
    constexpr Quaternion& operator*=(T s) { return *this = *this * s; }

    [[nodiscard]] constexpr T scalar() const { return w; }
    [[nodiscard]] constexpr Quaternion vector() const { return {T(0), x, y, z}; }
    [[nodiscard]] constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }
    [[nodiscard]] constexpr T norm_sq() const { return w * w + x * x + y * y + z * z; }
    [[nodiscard]] T norm() const { return std::sqrt(norm_sq()); }
};

using Quat = Quaternion<double>;

template <typename T>
constexpr Quaternion<T> qmul(const Quaternion<T>& a, const Quaternion<T>& b) {
    return a * b;
}

template <typename T>
constexpr Quaternion<T> conj(const Quaternion<T>& q) {
    return q.conjugate();
}

template <typename T>
T abs(const Quaternion<T>& q) {
    return q.norm();
}

/// Spatial-domain quaternion image; element (x1, x2) = (row, column).
using QImage = Grid<Quat>;

/// Embeds three equally sized colour planes as the pure quaternion image
/// r i + g j + b k.
inline QImage rgb_encode(const RealGrid& r, const RealGrid& g, const RealGrid& b) {
    require_same_shape(r, g, "rgb_encode");
    require_same_shape(r, b, "rgb_encode");
    QImage out(r.height(), r.width());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out.data()[n] = Quat{0.0, r.data()[n], g.data()[n], b.data()[n]};
    }
    return out;
}

struct ColorPlanes {
    RealGrid r, g, b;
};

/// Splits the i, j, k components back into colour planes. The scalar part
/// is dropped.
inline ColorPlanes rgb_decode(const QImage& img) {
    ColorPlanes out{RealGrid(img.height(), img.width()), RealGrid(img.height(), img.width()),
                    RealGrid(img.height(), img.width())};
    for (std::size_t n = 0; n < img.size(); ++n) {
        const Quat& q = img.data()[n];
        out.r.data()[n] = q.x;
        out.g.data()[n] = q.y;
        out.b.data()[n] = q.z;
    }
    return out;
}

inline QImage vector_part(const QImage& img) {
    QImage out(img.height(), img.width());
    for (std::size_t n = 0; n < img.size(); ++n) {
        out.data()[n] = img.data()[n].vector();
    }
    return out;
}

inline double max_abs_difference(const QImage& a, const QImage& b) {
    require_same_shape(a, b, "max_abs_difference");
    double err = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        err = std::fmax(err, (a.data()[n] - b.data()[n]).norm());
    }
    return err;
}

}  // namespace qlane
