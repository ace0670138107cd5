#pragma once

// 8-bit RGB rasters: PNG (via libpng) and binary/ASCII PNM decode, PNG and
// PPM encode. Pixel values stay 8-bit only at this boundary; everything
// downstream works on doubles.

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlane/grid.hpp"
#include "qlane/quaternion.hpp"

namespace qlane {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Bytes = std::vector<std::uint8_t>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Interleaved 8-bit RGB, row-major.
using RgbImage = Grid<Rgb>;

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, Bytes(text.begin(), text.end()));
}

namespace detail {

inline bool is_png(const Bytes& b) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

inline RgbImage decode_png(const Bytes& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DecodeError(std::string("png: ") + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
    // A null background composites alpha onto black.
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw DecodeError("png: " + msg);
    }
    RgbImage out(image.height, image.width);
    for (std::size_t n = 0; n < out.size(); ++n) {
        out.data()[n] = {buf[3 * n], buf[3 * n + 1], buf[3 * n + 2]};
    }
    return out;
}

class PnmReader {
public:
    explicit PnmReader(const Bytes& b) : b_(b) {}

    unsigned long header_int() {
        skip_space_and_comments();
        if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) throw DecodeError("pnm: malformed header");
        unsigned long v = 0;
        while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
            v = v * 10 + static_cast<unsigned long>(b_[pos_++] - '0');
            if (v > (1UL << 24)) throw DecodeError("pnm: header value too large");
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from binary data.
    void end_header() {
        if (pos_ >= b_.size() || !std::isspace(b_[pos_])) throw DecodeError("pnm: malformed header");
        ++pos_;
    }

    unsigned sample(bool ascii, bool wide) {
        if (ascii) return static_cast<unsigned>(header_int());
        const std::size_t n = wide ? 2 : 1;
        if (pos_ + n > b_.size()) throw DecodeError("pnm: truncated pixel data");
        unsigned v = b_[pos_++];
        if (wide) v = (v << 8) | b_[pos_++];
        return v;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            if (std::isspace(b_[pos_])) {
                ++pos_;
            } else if (b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const Bytes& b_;
    std::size_t pos_ = 2;
};

inline RgbImage decode_pnm(const Bytes& bytes) {
    const char kind = static_cast<char>(bytes[1]);
    const bool gray = kind == '2' || kind == '5';
    const bool ascii = kind == '2' || kind == '3';
    PnmReader rd(bytes);
    const auto width = rd.header_int();
    const auto height = rd.header_int();
    const auto maxval = rd.header_int();
    if (width == 0 || height == 0) throw DecodeError("pnm: zero-sized image");
    if (maxval == 0 || maxval > 65535) throw DecodeError("pnm: bad maxval");
    if (!ascii) rd.end_header();
    const bool wide = maxval > 255;
    auto scale = [&](unsigned v) {
        if (v > maxval) throw DecodeError("pnm: sample exceeds maxval");
        return static_cast<std::uint8_t>((v * 255UL + maxval / 2) / maxval);
    };
    RgbImage out(height, width);
    for (auto& px : out) {
        if (gray) {
            const auto v = scale(rd.sample(ascii, wide));
            px = {v, v, v};
        } else {
            px.r = scale(rd.sample(ascii, wide));
            px.g = scale(rd.sample(ascii, wide));
            px.b = scale(rd.sample(ascii, wide));
        }
    }
    return out;
}

}  // namespace detail

/// Decodes PNG or PNM (P2, P3, P5, P6) by content sniffing.
inline RgbImage decode_image(const Bytes& bytes) {
    if (detail::is_png(bytes)) return detail::decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' &&
        (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '5' || bytes[1] == '6')) {
        return detail::decode_pnm(bytes);
    }
    throw DecodeError("unrecognised image format (expected PNG or PNM)");
}

inline Bytes encode_png(const RgbImage& img) {
    if (img.empty()) throw std::invalid_argument("encode_png: empty image");
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buf(img.size() * 3);
    for (std::size_t n = 0; n < img.size(); ++n) {
        buf[3 * n] = img.data()[n].r;
        buf[3 * n + 1] = img.data()[n].g;
        buf[3 * n + 2] = img.data()[n].b;
    }
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, buf.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode: ") + image.message);
    }
    Bytes out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, buf.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

inline Bytes encode_ppm(const RgbImage& img) {
    const std::string header =
        "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.reserve(header.size() + img.size() * 3);
    for (const auto& px : img) {
        out.push_back(px.r);
        out.push_back(px.g);
        out.push_back(px.b);
    }
    return out;
}

inline ColorPlanes to_planes(const RgbImage& img) {
    ColorPlanes p{RealGrid(img.height(), img.width()), RealGrid(img.height(), img.width()),
                  RealGrid(img.height(), img.width())};
    for (std::size_t n = 0; n < img.size(); ++n) {
        p.r.data()[n] = img.data()[n].r;
        p.g.data()[n] = img.data()[n].g;
        p.b.data()[n] = img.data()[n].b;
    }
    return p;
}

inline RgbImage mask_to_image(const Grid<unsigned char>& mask) {
    RgbImage out(mask.height(), mask.width());
    for (std::size_t n = 0; n < mask.size(); ++n) {
        const std::uint8_t v = mask.data()[n] ? 255 : 0;
        out.data()[n] = {v, v, v};
    }
    return out;
}

}  // namespace qlane
