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

#include "inreg/encoding.hpp"

#include <cmath>
#include <numbers>

#include "inreg/error.hpp"

namespace inreg {

void FourierConfig::validate() const {
    if (num_frequencies < 1) throw Error("FourierConfig: num_frequencies must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("FourierConfig: sigma must be positive");
    if (input_dim < 1) throw Error("FourierConfig: input_dim must be >= 1");
}

namespace {

void encode_into(std::span<const double> x, const FourierConfig& cfg, double* out) {
    double freq = 2.0 * std::numbers::pi;
    for (std::size_t j = 0; j < cfg.num_frequencies; ++j) {
        for (std::size_t d = 0; d < cfg.input_dim; ++d) {
            const double a = freq * x[d];
            *out++ = std::cos(a);
            *out++ = std::sin(a);
        }
        freq *= cfg.sigma;
    }
}

void check_dim(std::span<const double> x, const FourierConfig& cfg) {
    if (x.size() != cfg.input_dim) throw ShapeError("fourier_encode", Shape{x.size()}, Shape{cfg.input_dim});
}

}  // namespace

std::vector<double> fourier_encode(std::span<const double> x, const FourierConfig& cfg) {
    check_dim(x, cfg);
    std::vector<double> out(cfg.encoded_dim());
    encode_into(x, cfg, out.data());
    return out;
}

std::vector<double> network_input(std::span<const double> x, const FourierConfig& cfg) {
    check_dim(x, cfg);
    std::vector<double> out(cfg.network_input_dim());
    std::copy(x.begin(), x.end(), out.begin());
    encode_into(x, cfg, out.data() + cfg.input_dim);
    return out;
}

std::vector<double> network_input_batch(std::span<const double> points, const FourierConfig& cfg) {
    const std::size_t d = cfg.input_dim;
    if (points.size() % d != 0) throw ShapeError("network_input_batch", Shape{points.size()}, Shape{d});
    const std::size_t n = points.size() / d;
    const std::size_t width = cfg.network_input_dim();
    std::vector<double> out(n * width);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = points.subspan(i * d, d);
        double* row = out.data() + i * width;
        std::copy(x.begin(), x.end(), row);
        encode_into(x, cfg, row + d);
    }
    return out;
}

}  // namespace inreg
