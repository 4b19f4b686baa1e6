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

#include <algorithm>
#include <cmath>

#include "inreg/metrics.hpp"
#include "oracles.hpp"

namespace inreg {
namespace {

Mask rect(std::size_t h, std::size_t w, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    Mask m(h, w);
    for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = c0; j < c1; ++j) m.at(i, j) = 1;
    }
    return m;
}

TEST(Dice, BasicCases) {
    const Mask a = rect(10, 10, 0, 5, 0, 10);
    const Mask b = rect(10, 10, 5, 10, 0, 10);
    EXPECT_EQ(dice(a, a), 1.0);
    EXPECT_EQ(dice(a, b), 0.0);
    EXPECT_EQ(dice(Mask(10, 10), Mask(10, 10)), 1.0);
    EXPECT_EQ(dice(a, Mask(10, 10)), 0.0);
    // 50 and 30 pixels sharing 20.
    const Mask c = rect(10, 10, 3, 6, 0, 10);
    EXPECT_NEAR(dice(a, c), 2.0 * 20 / (50 + 30), 1e-15);
    EXPECT_EQ(dice(a, c), dice(c, a));
    EXPECT_THROW(dice(a, Mask(5, 5)), ShapeError);
}

TEST(WarpMask, IdentityAndTranslation) {
    const Mask m = rect(16, 16, 4, 10, 3, 9);
    EXPECT_EQ(warp_mask(m, DisplacementField::zero(16, 16)), m);

    // Sampling at x + 2 px shifts the mask content 2 px to the left.
    auto shift = DisplacementField::zero(16, 16);
    for (std::size_t p = 0; p < shift.size(); ++p) shift.delta[2 * p] = 2.0 * 2.0 / 15.0;
    EXPECT_EQ(warp_mask(m, shift), rect(16, 16, 4, 10, 1, 7));
}

TEST(WarpMask, AreaScalesWithDilation) {
    const std::size_t n = 65;
    Mask disc(n, n);
    const auto grid = CoordinateGrid::make(n, n);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        disc.data[p] = std::hypot(grid.coords[2 * p], grid.coords[2 * p + 1]) < 0.5 ? 1 : 0;
    }
    // Phi(x) = 0.8 x magnifies the content by 1.25 in each direction.
    DisplacementField f{n, n, grid.coords};
    for (double& v : f.delta) v *= -0.2;
    const double ratio = static_cast<double>(warp_mask(disc, f).count()) / static_cast<double>(disc.count());
    EXPECT_NEAR(ratio, 1.5625, 0.06);
}

TEST(MaskImage, RoundTripAndThreshold) {
    Image img(2, 2, 1, std::vector<double>{0.49, 0.5, 1.0, 0.0});
    const Mask m = Mask::from_image(img);
    EXPECT_EQ(m.data, (std::vector<std::uint8_t>{0, 1, 1, 0}));
    EXPECT_EQ(Mask::from_image(m.to_image()), m);
}

Image pattern(std::size_t h, std::size_t w) {
    Image a(h, w, 1);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            a.at(i, j) = 0.5 + 0.3 * std::sin(0.3 * i) * std::cos(0.2 * j) + 0.1 * std::cos(0.7 * i + 0.4 * j);
        }
    }
    return a;
}

TEST(Ssim, IdenticalImagesGiveOne) {
    const auto a = oracle::random_image(16, 16, 3, 1);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
    EXPECT_NEAR(ssim(Image(12, 12, 1, 0.3), Image(12, 12, 1, 0.3)), 1.0, 1e-12);
}

TEST(Ssim, FrozenReferenceValues) {
    const Image a = pattern(24, 20);
    Image inverted = a;
    for (double& v : inverted.data) v = 1.0 - v;
    EXPECT_NEAR(ssim(a, inverted), -0.7869012087293578, 1e-10);

    Image noisy = a;
    for (std::size_t i = 0; i < 24; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            noisy.at(i, j) = std::clamp(a.at(i, j) + 0.05 * std::sin(1.3 * i * j + 0.1), 0.0, 1.0);
        }
    }
    EXPECT_NEAR(ssim(a, noisy), 0.9189067718456414, 1e-10);
}

TEST(Ssim, MatchesOracleAndIsSymmetric) {
    const auto a = oracle::random_image(19, 23, 1, 2);
    const auto b = oracle::random_image(19, 23, 1, 3);
    EXPECT_NEAR(ssim(a, b), oracle::ssim(a.data, b.data, 19, 23), 1e-12);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-15);
}

TEST(Ssim, AveragesChannels) {
    const auto a = oracle::random_image(14, 14, 3, 4);
    const auto b = oracle::random_image(14, 14, 3, 5);
    double ref = 0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> ca(196), cb(196);
        for (std::size_t p = 0; p < 196; ++p) {
            ca[p] = a.data[3 * p + c];
            cb[p] = b.data[3 * p + c];
        }
        ref += oracle::ssim(ca, cb, 14, 14) / 3.0;
    }
    EXPECT_NEAR(ssim(a, b), ref, 1e-12);
}

TEST(Ssim, RejectsSmallOrMismatchedImages) {
    EXPECT_THROW(ssim(Image(10, 20, 1), Image(10, 20, 1)), ShapeError);
    EXPECT_THROW(ssim(Image(20, 20, 1), Image(20, 20, 3)), ShapeError);
}

TEST(Folding, Percentages) {
    std::vector<double> det(4096, 1.0);
    EXPECT_EQ(folding_pct(det), 0.0);
    for (int k = 0; k < 100; ++k) det[k * 7] = k % 2 ? 0.0 : -0.3;
    EXPECT_NEAR(folding_pct(det), 100.0 * 100 / 4096, 1e-12);
    EXPECT_EQ(folding_pct(std::vector<double>(5, -1.0)), 100.0);
}

}  // namespace
}  // namespace inreg
