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
#include <string>

#include "inreg/image.hpp"

namespace inreg {

/// Reads an 8- or 16-bit grayscale/RGB PNG (palette expanded, alpha
/// dropped) into unit-range intensities.
Image load_png(const std::string& path);

/// Writes an 8-bit PNG; values are clamped to [0, 1] and rounded.
void save_png(const std::string& path, const Image& image);

/// 0.299 R + 0.587 G + 0.114 B; single-channel input is returned as is.
Image to_gray(const Image& image);

/// Bilinear resampling with pixel-center alignment and edge clamping.
/// Aspect ratio is not preserved.
Image resize(const Image& image, std::size_t target_h, std::size_t target_w);

/// Clamps to [0, 1] and quantizes to the 8-bit levels save_png() writes.
Image quantize8(const Image& image);

}  // namespace inreg
