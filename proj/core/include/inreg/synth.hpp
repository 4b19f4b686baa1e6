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

// Synthetic benchmark pairs with a known deformation.
//
// The fixed image is a smooth "anatomy" phantom: a soft-edged tissue
// ellipse containing several labelled structures and smaller unlabelled
// details. The ground-truth field u is divergence-free, derived from a
// low-frequency sinusoidal stream function and scaled so that its largest
// displacement equals deform_amp pixels, and the moving
// image is constructed so that M(x + u(x)) = F(x), i.e. u is exactly what a
// registration of M onto F should recover. Optional "expression" blobs are
// then added to M only.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "inreg/image.hpp"
#include "inreg/metrics.hpp"
#include "inreg/warp.hpp"

namespace inreg {

struct TextureConfig {
    std::size_t count = 0;
    double contrast = 0.5;
    double sigma_px = 2.5;
};

struct SyntheticConfig {
    std::uint64_t seed = 0;
    std::size_t size = 64;
    double deform_amp = 0.0;  // pixels
    TextureConfig texture;
    std::size_t structures = 3;
};

struct LabelledMask {
    std::string name;
    Mask mask;
};

struct SyntheticPair {
    Image moving;
    Image fixed;
    DisplacementField true_field;
    Mask texture_mask;
    std::vector<LabelledMask> fixed_structures;
    std::vector<LabelledMask> moving_structures;
};

/// Throws Error when the requested amplitude would fold the field.
SyntheticPair make_synthetic_pair(const SyntheticConfig& cfg);

/// Binary dilation with a (2r+1) x (2r+1) square.
Mask dilate(const Mask& mask, std::size_t radius);

}  // namespace inreg
