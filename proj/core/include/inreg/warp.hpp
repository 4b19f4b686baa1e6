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

// Grid geometry, bilinear warping and finite-difference derivatives.
//
// Coordinates are normalized to [-1, 1] with corner alignment: x runs along
// the width (column) axis, y along the height (row) axis, and pixel (i, j)
// sits at (-1 + 2j/(W-1), -1 + 2i/(H-1)). Point batches and per-pixel
// vectors are stored flat as [n, 2] = (x, y) pairs.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "inreg/autodiff.hpp"
#include "inreg/image.hpp"

namespace inreg {

struct CoordinateGrid {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> coords;  // [H*W, 2]

    static CoordinateGrid make(std::size_t height, std::size_t width);

    std::size_t size() const noexcept { return height * width; }
    double spacing_x() const { return 2.0 / static_cast<double>(width - 1); }
    double spacing_y() const { return 2.0 / static_cast<double>(height - 1); }
};

/// Per-pixel displacement in normalized units; Phi(x) = x + delta(x).
struct DisplacementField {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> delta;  // [H*W, 2]

    static DisplacementField zero(std::size_t height, std::size_t width);

    std::size_t size() const noexcept { return height * width; }
    /// Phi evaluated on the pixel grid, [H*W, 2].
    std::vector<double> transformed_points() const;
    /// Displacement converted to pixel units, [H*W, 2].
    std::vector<double> in_pixels() const;

    friend bool operator==(const DisplacementField&, const DisplacementField&) = default;
};

// ---------------------------------------------------------------- differentiable

/// Samples `image` ([H*W, C] on the tape) at `points` ([n, 2]). Pixel index
/// is (x + 1) / 2 * (W - 1); points beyond the border take the border value
/// and receive zero location gradient. Returns [n, C].
ad::Var bilinear_sample(ad::Var image, std::size_t height, std::size_t width, ad::Var points);

/// Central differences in normalized units, one-sided on the border.
/// [H*W, K] -> [H*W, 2K]; column 2k is d/dx of channel k, 2k+1 is d/dy.
ad::Var spatial_gradient(ad::Var values, std::size_t height, std::size_t width);

/// det(I + grad delta) per pixel from a displacement tensor [H*W, 2].
/// Returns [H*W, 1].
ad::Var jacobian_det(ad::Var delta, std::size_t height, std::size_t width);

// ---------------------------------------------------------------- plain

/// [n, C] intensities.
std::vector<double> bilinear_sample(const Image& image, std::span<const double> points);
/// T_phi(M): the image resampled at Phi of every grid pixel.
Image warp_image(const Image& image, const DisplacementField& field);
/// [H*W, C*2] laid out like the differentiable version.
std::vector<double> spatial_gradient(const Image& image);
/// H*W determinants.
std::vector<double> jacobian_det(const DisplacementField& field);

// ---------------------------------------------------------------- field file

/// Layout: char[4] "INRF", u32 H, u32 W, then H*W*2 f32 (dx, dy), all
/// little-endian, row-major. Values are stored in single precision.
void write_field(std::ostream& os, const DisplacementField& field);
DisplacementField read_field(std::istream& is);
void save_field(const std::string& path, const DisplacementField& field);
DisplacementField load_field(const std::string& path);

}  // namespace inreg
