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


#include <gtest/gtest.h>
#include <png.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "inreg/imageio.hpp"
#include "oracles.hpp"

namespace inreg {
namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("inreg_test_" + name)).string();
}

// Minimal libpng writer independent of save_png(); rows hold raw bytes.
void write_raw_png(const std::string& path, int w, int h, int depth, int color, std::vector<std::vector<png_byte>> rows,
                   const std::vector<png_color>& palette = {}) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    ASSERT_NE(f, nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    png_init_io(png, f);
    png_set_IHDR(png, info, w, h, depth, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    if (!palette.empty()) png_set_PLTE(png, info, palette.data(), static_cast<int>(palette.size()));
    std::vector<png_bytep> ptrs;
    for (auto& r : rows) ptrs.push_back(r.data());
    png_set_rows(png, info, ptrs.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
}

TEST(LoadPng, EightBitGray) {
    const auto path = temp_path("gray8.png");
    write_raw_png(path, 2, 2, 8, PNG_COLOR_TYPE_GRAY, {{0, 255}, {128, 64}});
    const Image img = load_png(path);
    ASSERT_EQ(img.shape(), (Shape{2, 2, 1}));
    EXPECT_EQ(img.at(0, 0), 0.0);
    EXPECT_EQ(img.at(0, 1), 1.0);
    EXPECT_NEAR(img.at(1, 0), 0.50196, 1e-5);
    EXPECT_NEAR(img.at(1, 1), 0.25098, 1e-5);
    std::filesystem::remove(path);
}

TEST(LoadPng, SixteenBitGray) {
    const auto path = temp_path("gray16.png");
    write_raw_png(path, 2, 1, 16, PNG_COLOR_TYPE_GRAY, {{0x80, 0x00, 0xff, 0xff}});
    const Image img = load_png(path);
    EXPECT_NEAR(img.at(0, 0), 32768.0 / 65535.0, 1e-15);
    EXPECT_EQ(img.at(0, 1), 1.0);
    std::filesystem::remove(path);
}

TEST(LoadPng, RgbaDropsAlphaAndPaletteExpands) {
    const auto path = temp_path("rgba.png");
    write_raw_png(path, 1, 1, 8, PNG_COLOR_TYPE_RGBA, {{255, 0, 51, 7}});
    const Image img = load_png(path);
    ASSERT_EQ(img.shape(), (Shape{1, 1, 3}));
    EXPECT_EQ(img.at(0, 0, 0), 1.0);
    EXPECT_EQ(img.at(0, 0, 1), 0.0);
    EXPECT_EQ(img.at(0, 0, 2), 0.2);

    write_raw_png(path, 2, 1, 8, PNG_COLOR_TYPE_PALETTE, {{1, 0}}, {{0, 0, 0}, {255, 255, 0}});
    const Image pal = load_png(path);
    ASSERT_EQ(pal.shape(), (Shape{1, 2, 3}));
    EXPECT_EQ(pal.at(0, 0, 0), 1.0);
    EXPECT_EQ(pal.at(0, 0, 2), 0.0);
    EXPECT_EQ(pal.at(0, 1, 1), 0.0);
    std::filesystem::remove(path);
}

TEST(ToGray, LuminanceWeights) {
    const auto rgb = oracle::random_image(3, 4, 3, 1);
    const Image g = to_gray(rgb);
    ASSERT_EQ(g.channels, 1u);
    for (std::size_t p = 0; p < 12; ++p) {
        EXPECT_NEAR(g.data[p], 0.299 * rgb.data[3 * p] + 0.587 * rgb.data[3 * p + 1] + 0.114 * rgb.data[3 * p + 2],
                    1e-15);
    }
    const auto gray = oracle::random_image(3, 4, 1, 2);
    EXPECT_EQ(to_gray(gray), gray);
    EXPECT_THROW(to_gray(Image(2, 2, 2)), ShapeError);
}

TEST(SavePng, RoundTripWithinQuantization) {
    const auto path = temp_path("roundtrip.png");
    for (std::size_t c : {1u, 3u}) {
        auto img = oracle::random_image(9, 13, c, 3 + c);
        img.data[0] = -0.5;
        img.data[1] = 1.7;
        save_png(path, img);
        const Image back = load_png(path);
        ASSERT_EQ(back.shape(), img.shape());
        for (std::size_t k = 0; k < img.data.size(); ++k) {
            EXPECT_LE(std::abs(back.data[k] - std::clamp(img.data[k], 0.0, 1.0)), 0.5 / 255.0 + 1e-12);
        }
        EXPECT_EQ(back, quantize8(img));
        save_png(path, back);
        EXPECT_EQ(load_png(path), back);
    }
    std::filesystem::remove(path);
}

TEST(SavePng, RejectsUnsupportedImages) {
    EXPECT_THROW(save_png(temp_path("bad.png"), Image(2, 2, 2)), IoError);
    EXPECT_THROW(save_png(temp_path("bad.png"), Image()), IoError);
    EXPECT_THROW(save_png("/nonexistent/dir/out.png", Image(2, 2, 1)), IoError);
}

TEST(LoadPng, ErrorsCarryThePath) {
    try {
        load_png("/nonexistent/missing.png");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/missing.png"), std::string::npos);
    }
    const auto path = temp_path("corrupt.png");
    {
        std::ofstream os(path, std::ios::binary);
        os << "not a png at all";
    }
    EXPECT_THROW(load_png(path), IoError);
    // Valid signature, truncated body.
    save_png(path, oracle::random_image(16, 16, 1, 9));
    std::filesystem::resize_file(path, 40);
    EXPECT_THROW(load_png(path), IoError);
    std::filesystem::remove(path);
}

TEST(Resize, IdentityAndConstant) {
    const auto img = oracle::random_image(7, 5, 3, 10);
    EXPECT_EQ(resize(img, 7, 5), img);
    const Image c(9, 11, 1, 0.37);
    for (auto [h, w] : {std::pair<std::size_t, std::size_t>{4, 4}, {20, 3}, {9, 30}}) {
        const Image r = resize(c, h, w);
        ASSERT_EQ(r.shape(), (Shape{h, w, 1}));
        for (double v : r.data) EXPECT_NEAR(v, 0.37, 1e-15);
    }
    const Image once = resize(img, 12, 4);
    EXPECT_EQ(resize(once, 12, 4), once);
}

TEST(Resize, CheckerboardDownscaleIsMidGray) {
    Image board(8, 8, 1);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) board.at(i, j) = (i + j) % 2;
    }
    const Image r = resize(board, 4, 4);
    for (double v : r.data) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Resize, MatchesBilinearOracle) {
    const auto img = oracle::random_image(6, 9, 1, 11);
    const Image r = resize(img, 10, 4);
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double py = std::clamp((i + 0.5) * 6.0 / 10.0 - 0.5, 0.0, 5.0);
            const double px = std::clamp((j + 0.5) * 9.0 / 4.0 - 0.5, 0.0, 8.0);
            // Convert pixel positions to the oracle's normalized coordinates.
            const double x = px / 8.0 * 2.0 - 1.0;
            const double y = py / 5.0 * 2.0 - 1.0;
            EXPECT_NEAR(r.at(i, j), oracle::bilinear(img, x, y, 0), 1e-12);
        }
    }
}

TEST(Resize, RejectsDegenerateTargets) {
    EXPECT_THROW(resize(Image(4, 4, 1), 1, 4), ShapeError);
    EXPECT_THROW(resize(Image(), 4, 4), ShapeError);
}

}  // namespace
}  // namespace inreg
