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

// Batched sin/cos of scale * x. Branch-free so the main loop vectorizes;
// arguments beyond the reduction range fall back to the libm functions.
// Accuracy is within a few ulp of libm on the reduced range.

#pragma once

#include <cstddef>

namespace inreg::detail {

void sincos_scaled(const double* __restrict x, double scale, double* __restrict s, double* __restrict c,
                   std::size_t n);

}  // namespace inreg::detail
