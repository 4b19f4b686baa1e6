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
#include <vector>

#include "inreg/error.hpp"

namespace inreg {

/// Dense H x W x C grid, row-major with channels last. Loaded images hold
/// unit-range intensities; rendered network outputs may leave that range.
struct Image {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(std::size_t h, std::size_t w, std::size_t c, double fill = 0.0)
        : height(h), width(w), channels(c), data(h * w * c, fill) {}
    Image(std::size_t h, std::size_t w, std::size_t c, std::vector<double> values)
        : height(h), width(w), channels(c), data(std::move(values)) {
        if (data.size() != h * w * c) throw ShapeError("Image", Shape{h, w, c}, Shape{data.size()});
    }

    std::size_t pixels() const noexcept { return height * width; }
    bool empty() const noexcept { return data.empty(); }
    Shape shape() const { return {height, width, channels}; }

    double& at(std::size_t row, std::size_t col, std::size_t ch = 0) {
        return data[(row * width + col) * channels + ch];
    }
    double at(std::size_t row, std::size_t col, std::size_t ch = 0) const {
        return data[(row * width + col) * channels + ch];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

}  // namespace inreg
