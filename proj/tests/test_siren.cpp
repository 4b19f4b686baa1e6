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
#include <cstring>
#include <iostream>
#include <ranges>
#include <sstream>

#include "inreg/siren.hpp"
#include "inreg/warp.hpp"
#include "oracles.hpp"

namespace inreg {
namespace {

SirenConfig small_config() {
    SirenConfig cfg;
    cfg.hidden_width = 8;
    cfg.num_hidden = 3;
    cfg.skip_index = 2;
    cfg.encoding.num_frequencies = 2;
    return cfg;
}

TEST(Siren, HiddenBoundClosedForm) {
    SirenConfig cfg;
    EXPECT_NEAR(cfg.hidden_bound(), std::sqrt(6.0 / 230400.0), 1e-18);
    EXPECT_NEAR(cfg.hidden_bound(), 0.005103, 5e-7);
    EXPECT_EQ(cfg.output_bound(), 1e-4);
    cfg.last_layer_bound = 0.0;
    EXPECT_EQ(cfg.output_bound(), cfg.hidden_bound());
}

TEST(Siren, LayerWidthsAndParameterCount) {
    const SirenNetwork net(SirenConfig{}, 2);
    const auto& l = net.layers();
    ASSERT_EQ(l.size(), 6u);
    const std::size_t in[] = {26, 256, 256, 282, 256, 256};
    const std::size_t out[] = {256, 256, 256, 256, 256, 2};
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_EQ(l[k].in, in[k]) << k;
        EXPECT_EQ(l[k].out, out[k]) << k;
    }
    const std::size_t hand = (26 * 256 + 256) + 2 * (256 * 256 + 256) + (282 * 256 + 256) + (256 * 256 + 256) +
                             (256 * 2 + 2);
    EXPECT_EQ(hand, 277250u);
    EXPECT_EQ(net.parameter_count(), hand);
}

TEST(Siren, InitBoundsAndZeroBiases) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const auto net = SirenNetwork::init(seed, 2, SirenConfig{});
        const double hb = net.config().hidden_bound();
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            const double bound = l + 1 == net.layers().size() ? 1e-4 : hb;
            double max_abs = 0.0;
            for (double w : net.weights(l)) max_abs = std::max(max_abs, std::abs(w));
            EXPECT_LE(max_abs, bound);
            EXPECT_GT(max_abs, 0.9 * bound);
            for (double b : net.biases(l)) EXPECT_EQ(b, 0.0);
        }
    }
}

TEST(Siren, SameSeedSameParameters) {
    const auto a = SirenNetwork::init(17, 2, SirenConfig{});
    const auto b = SirenNetwork::init(17, 2, SirenConfig{});
    const auto c = SirenNetwork::init(18, 2, SirenConfig{});
    EXPECT_TRUE(std::ranges::equal(a.parameters(), b.parameters()));
    EXPECT_FALSE(std::ranges::equal(a.parameters(), c.parameters()));
}

TEST(Siren, ZeroParametersGiveZeroOutput) {
    const SirenNetwork net(SirenConfig{}, 3);
    const auto pts = oracle::random_vector(40, 2);
    for (double v : net.evaluate(pts)) EXPECT_EQ(v, 0.0);
}

TEST(Siren, FullGridBatchShape) {
    const auto net = SirenNetwork::init(1, 2, SirenConfig{});
    const auto grid = CoordinateGrid::make(256, 256);
    ad::Tape tape;
    auto bound = net.bind(tape, false);
    ad::Var y = net.forward(bound, grid.coords);
    EXPECT_EQ(y.shape(), (Shape{65536, 2}));
}

TEST(Siren, FreshDeformationIsNearIdentity) {
    const auto grid = CoordinateGrid::make(32, 32);
    double observed = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto net = SirenNetwork::init(seed, 2, SirenConfig{});
        for (double v : net.evaluate(grid.coords)) observed = std::max(observed, std::abs(v));
    }
    RecordProperty("max_initial_displacement", std::to_string(observed));
    std::cout << "[ info ] max |delta| over 10 fresh networks: " << observed << '\n';
    EXPECT_LT(observed, 0.05);
}

TEST(Siren, BatchIndependence) {
    const auto net = SirenNetwork::init(4, 2, small_config());
    const auto pts = oracle::random_vector(2 * 12, 5);
    const auto all = net.evaluate(pts);
    const auto head = net.evaluate(std::span<const double>(pts).first(10));
    const auto tail = net.evaluate(std::span<const double>(pts).subspan(10));
    std::vector<double> joined = head;
    joined.insert(joined.end(), tail.begin(), tail.end());
    ASSERT_EQ(all.size(), joined.size());
    for (std::size_t k = 0; k < all.size(); ++k) EXPECT_NEAR(all[k], joined[k], 1e-13);
}

TEST(Siren, ForwardMatchesManualRecurrence) {
    const auto cfg = small_config();
    auto net = SirenNetwork::init(8, 1, cfg);
    // Non-zero biases so their sign convention is exercised.
    auto params = net.parameters();
    for (const auto& l : net.layers()) {
        for (std::size_t k = 0; k < l.out; ++k) params[l.bias_offset + k] = 0.01 * static_cast<double>(k + 1);
    }
    const std::vector<double> x{0.25, -0.6};
    const auto z0 = network_input(x, cfg.encoding);
    std::vector<double> z = z0;
    const auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::vector<double> next(layers[l].out);
        auto w = net.weights(l);
        auto b = net.biases(l);
        for (std::size_t o = 0; o < layers[l].out; ++o) {
            double s = -b[o];
            for (std::size_t i = 0; i < layers[l].in; ++i) s += w[o * layers[l].in + i] * z[i];
            next[o] = l + 1 < layers.size() ? std::sin(cfg.omega * s) : s;
        }
        if (l + 1 == cfg.skip_index) next.insert(next.end(), z0.begin(), z0.end());
        z = next;
    }
    EXPECT_NEAR(net.evaluate(x)[0], z[0], 1e-12);
}

TEST(Siren, ParameterGradientMatchesFiniteDifferences) {
    auto cfg = small_config();
    cfg.last_layer_bound = 0.0;
    const auto pts = oracle::random_vector(2 * 6, 21);
    const auto target = oracle::random_vector(6, 22);
    auto net = SirenNetwork::init(23, 1, cfg);
    auto loss = [&](const SirenNetwork& n, ad::Tape& t, SirenNetwork::Bound& b) {
        b = n.bind(t);
        ad::Var y = n.forward(b, pts);
        return ad::mean(ad::square(y - t.constant({6, 1}, target)));
    };
    ad::Tape tape;
    SirenNetwork::Bound bound;
    tape.backward(loss(net, tape, bound));
    const auto analytic = bound.gradient();
    const std::vector<double> p0(net.parameters().begin(), net.parameters().end());
    auto eval = [&](const std::vector<double>& p) {
        SirenNetwork copy = net;
        std::ranges::copy(p, copy.parameters().begin());
        ad::Tape t;
        SirenNetwork::Bound b;
        return loss(copy, t, b).item();
    };
    EXPECT_LT(oracle::max_relative_error(analytic, oracle::fd_gradient(eval, p0, 1e-6)), 1e-5);
}

TEST(Siren, WidthMismatchIsRejected) {
    const auto net = SirenNetwork::init(1, 2, small_config());
    ad::Tape tape;
    auto bound = net.bind(tape, false);
    ad::Var bad = tape.constant({3, 5}, std::vector<double>(15, 0.0));
    EXPECT_THROW(net.forward(bound, bad), ShapeError);
    const auto other = SirenNetwork::init(1, 2, small_config());
    ad::Var ok = tape.constant({1, net.input_dim()}, std::vector<double>(net.input_dim(), 0.0));
    EXPECT_THROW(other.forward(bound, ok), Error);
}

TEST(Siren, CheckpointRoundTripIsBitExact) {
    const auto net = SirenNetwork::init(31, 3, small_config());
    std::stringstream ss;
    write_checkpoint(ss, net);
    const auto back = read_checkpoint(ss);
    EXPECT_EQ(back.output_dim(), 3u);
    EXPECT_EQ(back.config().hidden_width, 8u);
    EXPECT_EQ(back.config().skip_index, 2u);
    EXPECT_EQ(back.config().encoding.num_frequencies, 2u);
    ASSERT_EQ(back.parameter_count(), net.parameter_count());
    EXPECT_EQ(std::memcmp(back.parameters().data(), net.parameters().data(), net.parameter_count() * sizeof(double)),
              0);
    std::stringstream again;
    write_checkpoint(again, back);
    EXPECT_EQ(again.str(), ss.str());
}

TEST(Siren, CorruptCheckpointIsRejected) {
    const auto net = SirenNetwork::init(31, 1, small_config());
    std::stringstream ss;
    write_checkpoint(ss, net);
    std::string bytes = ss.str();
    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    std::stringstream a(bad_magic);
    EXPECT_THROW(read_checkpoint(a), Error);
    std::stringstream b(bytes.substr(0, bytes.size() - 5));
    EXPECT_THROW(read_checkpoint(b), Error);
    // hidden_width follows magic, version, input_dim, num_frequencies and sigma.
    std::string huge = bytes;
    huge.replace(24, 4, "\xff\xff\xff\x7f", 4);
    std::stringstream c(huge);
    EXPECT_THROW(read_checkpoint(c), Error);
    EXPECT_THROW(load_checkpoint("/nonexistent/dir/net.inrs"), IoError);
}

}  // namespace
}  // namespace inreg
