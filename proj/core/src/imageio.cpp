// Copyright 2026 The inreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "inreg/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

namespace inreg {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_error_handler(png_structp png, png_const_charp msg) {
    auto* out = static_cast<std::string*>(png_get_error_ptr(png));
    if (out) *out = msg;
    png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

double to_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Image load_png(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError(path, "cannot open for reading");
    unsigned char sig[8] = {};
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw IoError(path, "not a PNG file");
    }

    std::string message;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
    if (!png) throw IoError(path, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError(path, "png_create_info_struct failed");
    }

    Image img;
    volatile bool failed = false;
    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, file.get());
        png_set_sig_bytes(png, 8);
        png_read_png(png, info,
                     PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA | PNG_TRANSFORM_PACKING, nullptr);
        const std::size_t w = png_get_image_width(png, info);
        const std::size_t h = png_get_image_height(png, info);
        const int depth = png_get_bit_depth(png, info);
        const int color = png_get_color_type(png, info);
        const std::size_t stored = png_get_channels(png, info);
        const std::size_t c = (color & PNG_COLOR_MASK_COLOR) ? 3 : 1;
        png_bytepp rows = png_get_rows(png, info);
        img = Image(h, w, c);
        const double scale = depth == 16 ? 65535.0 : 255.0;
        for (std::size_t i = 0; i < h; ++i) {
            const png_bytep row = rows[i];
            for (std::size_t j = 0; j < w; ++j) {
                for (std::size_t ch = 0; ch < c; ++ch) {
                    const std::size_t idx = j * stored + ch;
                    const double v = depth == 16 ? static_cast<double>((row[2 * idx] << 8) | row[2 * idx + 1])
                                                 : static_cast<double>(row[idx]);
                    img.at(i, j, ch) = v / scale;
                }
            }
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (failed) throw IoError(path, "corrupt PNG: " + message);
    return img;
}

void save_png(const std::string& path, const Image& image) {
    if (image.empty() || (image.channels != 1 && image.channels != 3)) {
        throw IoError(path, "save_png expects a non-empty 1- or 3-channel image");
    }
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError(path, "cannot open for writing");

    std::string message;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
    if (!png) throw IoError(path, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError(path, "png_create_info_struct failed");
    }

    std::vector<png_byte> bytes(image.data.size());
    for (std::size_t k = 0; k < bytes.size(); ++k) {
        bytes[k] = static_cast<png_byte>(std::lround(to_unit(image.data[k]) * 255.0));
    }
    std::vector<png_bytep> rows(image.height);
    for (std::size_t i = 0; i < image.height; ++i) rows[i] = bytes.data() + i * image.width * image.channels;

    volatile bool failed = false;
    if (setjmp(png_jmpbuf(png))) {
        failed = true;
    } else {
        png_init_io(png, file.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                     image.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_set_rows(png, info, rows.data());
        png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    }
    png_destroy_write_struct(&png, &info);
    if (failed) throw IoError(path, "PNG write failed: " + message);
}

Image to_gray(const Image& image) {
    if (image.channels == 1) return image;
    if (image.channels != 3) throw ShapeError("to_gray", image.shape(), Shape{image.height, image.width, 3});
    Image out(image.height, image.width, 1);
    for (std::size_t p = 0; p < image.pixels(); ++p) {
        const double* px = &image.data[p * 3];
        out.data[p] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
    return out;
}

Image resize(const Image& image, std::size_t target_h, std::size_t target_w) {
    if (target_h < 2 || target_w < 2) throw ShapeError("resize", image.shape(), Shape{target_h, target_w});
    if (image.empty()) throw ShapeError("resize", image.shape(), Shape{1, 1});
    if (target_h == image.height && target_w == image.width) return image;

    struct Tap {
        std::size_t lo, hi;
        double frac;
    };
    auto taps = [](std::size_t src, std::size_t dst) {
        std::vector<Tap> t(dst);
        const double ratio = static_cast<double>(src) / static_cast<double>(dst);
        const double last = static_cast<double>(src - 1);
        for (std::size_t k = 0; k < dst; ++k) {
            const double pos = std::clamp((static_cast<double>(k) + 0.5) * ratio - 0.5, 0.0, last);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, src - 1);
            t[k] = {lo, hi, pos - static_cast<double>(lo)};
        }
        return t;
    };
    const auto ty = taps(image.height, target_h);
    const auto tx = taps(image.width, target_w);
    Image out(target_h, target_w, image.channels);
    for (std::size_t i = 0; i < target_h; ++i) {
        for (std::size_t j = 0; j < target_w; ++j) {
            for (std::size_t c = 0; c < image.channels; ++c) {
                const double top = (1.0 - tx[j].frac) * image.at(ty[i].lo, tx[j].lo, c) + tx[j].frac * image.at(ty[i].lo, tx[j].hi, c);
                const double bot = (1.0 - tx[j].frac) * image.at(ty[i].hi, tx[j].lo, c) + tx[j].frac * image.at(ty[i].hi, tx[j].hi, c);
                out.at(i, j, c) = (1.0 - ty[i].frac) * top + ty[i].frac * bot;
            }
        }
    }
    return out;
}

Image quantize8(const Image& image) {
    Image out = image;
    for (double& v : out.data) v = static_cast<double>(std::lround(to_unit(v) * 255.0)) / 255.0;
    return out;
}

}  // namespace inreg
