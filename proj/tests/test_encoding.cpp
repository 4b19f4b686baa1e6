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

#include <cmath>

#include "inreg/encoding.hpp"
#include "oracles.hpp"

namespace inreg {
namespace {

TEST(Encoding, DefaultLengths) {
    FourierConfig cfg;
    EXPECT_EQ(cfg.encoded_dim(), 24u);
    EXPECT_EQ(cfg.network_input_dim(), 26u);
    const std::vector<double> x{0.3, -0.8};
    EXPECT_EQ(fourier_encode(x, cfg).size(), 24u);
    EXPECT_EQ(network_input(x, cfg).size(), 26u);
}

TEST(Encoding, OriginIsAllCosOne) {
    const auto fe = fourier_encode(std::vector<double>{0.0, 0.0}, {});
    ASSERT_EQ(fe.size(), 24u);
    for (std::size_t k = 0; k < fe.size(); k += 2) {
        EXPECT_EQ(fe[k], 1.0);
        EXPECT_EQ(fe[k + 1], 0.0);
    }
    const auto in = network_input(std::vector<double>{0.0, 0.0}, {});
    EXPECT_EQ(in[0], 0.0);
    EXPECT_EQ(in[1], 0.0);
    EXPECT_EQ(in[2], 1.0);
    EXPECT_EQ(in[3], 0.0);
}

TEST(Encoding, HalfCoordinateLowestFrequency) {
    const auto fe = fourier_encode(std::vector<double>{0.5, 0.0}, {});
    EXPECT_NEAR(fe[0], -1.0, 1e-15);
    EXPECT_NEAR(fe[1], 0.0, 1e-15);
}

TEST(Encoding, MatchesDirectFormula) {
    const std::vector<double> x{0.1, -0.3};
    const auto fe = fourier_encode(x, {});
    const auto ref = oracle::fourier_features(x, 6, 2.0);
    ASSERT_EQ(fe.size(), ref.size());
    for (std::size_t k = 0; k < fe.size(); ++k) EXPECT_NEAR(fe[k], ref[k], 1e-12) << k;
}

TEST(Encoding, SingleFrequencyAtOne) {
    FourierConfig cfg;
    cfg.num_frequencies = 1;
    const auto in = network_input(std::vector<double>{1.0, 1.0}, cfg);
    const std::vector<double> expected{1, 1, 1, 0, 1, 0};
    ASSERT_EQ(in.size(), expected.size());
    for (std::size_t k = 0; k < in.size(); ++k) EXPECT_NEAR(in[k], expected[k], 1e-15);
}

TEST(Encoding, ComponentsBoundedAndParityHolds) {
    const auto pts = oracle::random_vector(200, 11);
    for (std::size_t p = 0; p < 100; ++p) {
        const std::vector<double> x{pts[2 * p], pts[2 * p + 1]};
        const std::vector<double> neg{-x[0], -x[1]};
        const auto a = fourier_encode(x, {});
        const auto b = fourier_encode(neg, {});
        for (std::size_t k = 0; k < a.size(); k += 2) {
            EXPECT_LE(std::abs(a[k]), 1.0);
            EXPECT_LE(std::abs(a[k + 1]), 1.0);
            EXPECT_EQ(a[k], b[k]);
            EXPECT_EQ(a[k + 1], -b[k + 1]);
        }
    }
}

TEST(Encoding, BatchMatchesPointwise) {
    const auto pts = oracle::random_vector(20, 12);
    const auto batch = network_input_batch(pts, {});
    ASSERT_EQ(batch.size(), 10u * 26u);
    for (std::size_t p = 0; p < 10; ++p) {
        const auto one = network_input(std::vector<double>{pts[2 * p], pts[2 * p + 1]}, {});
        for (std::size_t k = 0; k < 26; ++k) EXPECT_EQ(batch[p * 26 + k], one[k]);
    }
}

TEST(Encoding, RejectsBadConfigAndInput) {
    FourierConfig cfg;
    cfg.num_frequencies = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.sigma = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    EXPECT_THROW(fourier_encode(std::vector<double>{1.0, 2.0, 3.0}, {}), ShapeError);
}

}  // namespace
}  // namespace inreg
