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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "inreg/image.hpp"
#include "inreg/warp.hpp"

namespace inreg {

/// Binary segmentation on an H x W grid.
struct Mask {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(std::size_t h, std::size_t w) : height(h), width(w), data(h * w, 0) {}

    /// Pixels with value >= 0.5 in channel 0.
    static Mask from_image(const Image& img);
    Image to_image() const;

    std::size_t count() const;
    std::uint8_t& at(std::size_t row, std::size_t col) { return data[row * width + col]; }
    std::uint8_t at(std::size_t row, std::size_t col) const { return data[row * width + col]; }

    friend bool operator==(const Mask&, const Mask&) = default;
};

struct MetricReport {
    std::map<std::string, double> dice;
    double ssim = 0.0;
    double folding_pct = 0.0;
};

/// 2|A n B| / (|A| + |B|); 1 when both masks are empty.
double dice(const Mask& a, const Mask& b);

/// Bilinear sample at Phi(grid), then threshold at 0.5.
Mask warp_mask(const Mask& mask, const DisplacementField& field);

struct SsimConfig {
    std::size_t window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 1.0;
};

/// Mean local SSIM over every position where the Gaussian window fits
/// inside the image, averaged across channels.
double ssim(const Image& a, const Image& b, const SsimConfig& cfg = {});

/// 100 * |{det <= 0}| / N.
double folding_pct(std::span<const double> det);

}  // namespace inreg
