#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlane {

/// Dense row-major 2D grid.
///
/// Indexing is (row, col). For image-shaped grids the row index is the
/// first spatial variable x1 (height M) and the column index is the second
/// variable x2 (width N), so element (x1, x2) lives at x1 * width + x2.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;

    Grid(std::size_t height, std::size_t width, const T& fill = T{})
        : height_(height), width_(width), data_(height * width, fill) {}

    Grid(std::size_t height, std::size_t width, std::vector<T> data)
        : height_(height), width_(width), data_(std::move(data)) {
        if (data_.size() != height_ * width_) {
            throw std::invalid_argument("Grid: data length " + std::to_string(data_.size()) +
                                        " does not match " + std::to_string(height_) + "x" +
                                        std::to_string(width_));
        }
    }

    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const noexcept {
        return data_[row * width_ + col];
    }

    T& at(std::size_t row, std::size_t col) {
        check(row, col);
        return (*this)(row, col);
    }
    const T& at(std::size_t row, std::size_t col) const {
        check(row, col);
        return (*this)(row, col);
    }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
    std::span<const T> row(std::size_t r) const noexcept {
        return {data_.data() + r * width_, width_};
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    [[nodiscard]] bool same_shape(const Grid& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    bool operator==(const Grid&) const = default;

private:
    void check(std::size_t row, std::size_t col) const {
        if (row >= height_ || col >= width_) {
            throw std::out_of_range("Grid: index out of range");
        }
    }

    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<T> data_;
};

using RealGrid = Grid<double>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
    if (a.height() != b.height() || a.width() != b.width()) {
        throw std::invalid_argument(std::string(what) + ": grid size mismatch (" +
                                    std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                                    " vs " + std::to_string(b.height()) + "x" +
                                    std::to_string(b.width()) + ")");
    }
}

}  // namespace qlane
