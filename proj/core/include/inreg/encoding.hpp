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
#include <span>
#include <vector>

namespace inreg {

/// Geometric Fourier features: frequencies 2*pi*sigma^j for j = 0..N-1.
struct FourierConfig {
    std::size_t num_frequencies = 6;
    double sigma = 2.0;
    std::size_t input_dim = 2;

    void validate() const;
    std::size_t encoded_dim() const { return 2 * num_frequencies * input_dim; }
    /// Raw coordinates plus their encoding.
    std::size_t network_input_dim() const { return input_dim + encoded_dim(); }
};

/// Layout: for each frequency j, for each coordinate d: cos, sin.
std::vector<double> fourier_encode(std::span<const double> x, const FourierConfig& cfg);

/// [x, FE(x)].
std::vector<double> network_input(std::span<const double> x, const FourierConfig& cfg);

/// Row-major [n, network_input_dim] matrix for a batch of n points stored as
/// consecutive input_dim-tuples.
std::vector<double> network_input_batch(std::span<const double> points, const FourierConfig& cfg);

}  // namespace inreg
