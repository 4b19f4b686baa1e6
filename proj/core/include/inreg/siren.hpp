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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "inreg/autodiff.hpp"
#include "inreg/encoding.hpp"

namespace inreg {

struct SirenConfig {
    std::size_t hidden_width = 256;
    std::size_t num_hidden = 5;
    /// 1-based hidden layer whose output is concatenated with the network
    /// input. 0 disables the skip connection.
    std::size_t skip_index = 3;
    double omega = 30.0;
    /// Numerator of the uniform bound sqrt(c / (n * omega^2)), n = hidden_width.
    double init_c = 6.0;
    /// Bound of the output layer weights. Values <= 0 select the hidden bound.
    double last_layer_bound = 1e-4;
    FourierConfig encoding;

    void validate() const;
    double hidden_bound() const;
    double output_bound() const;
};

/// Sine-activated MLP with Fourier-encoded input and one skip concatenation:
///
///   z0 = [x, FE(x)]
///   z_l = sin(omega * (W_l z_{l-1} - b_l)),  concatenated with z0 at l = skip
///   y   = W_L z_{L-1} - b_L
///
/// Parameters live in one flat buffer: for every layer the row-major weight
/// matrix [out, in] followed by the bias vector [out].
class SirenNetwork {
public:
    struct Layer {
        std::size_t in = 0;
        std::size_t out = 0;
        std::size_t weight_offset = 0;
        std::size_t bias_offset = 0;
    };

    /// Parameters placed on a tape for one forward/backward pass.
    struct Bound {
        const SirenNetwork* network = nullptr;
        std::vector<ad::Var> weights;
        std::vector<ad::Var> biases;

        /// Gradient of the last backward() in flat parameter order.
        std::vector<double> gradient() const;
    };

    SirenNetwork(SirenConfig cfg, std::size_t output_dim);

    static SirenNetwork init(std::uint64_t seed, std::size_t output_dim, const SirenConfig& cfg);

    const SirenConfig& config() const noexcept { return cfg_; }
    std::size_t output_dim() const noexcept { return output_dim_; }
    std::size_t input_dim() const noexcept { return cfg_.encoding.network_input_dim(); }
    const std::vector<Layer>& layers() const noexcept { return layers_; }

    std::size_t parameter_count() const noexcept { return params_.size(); }
    std::span<double> parameters() noexcept { return params_; }
    std::span<const double> parameters() const noexcept { return params_; }

    std::span<const double> weights(std::size_t layer) const;
    std::span<const double> biases(std::size_t layer) const;

    Bound bind(ad::Tape& tape, bool requires_grad = true) const;

    /// Forward pass on already encoded input [n, input_dim()].
    ad::Var forward(const Bound& bound, ad::Var encoded) const;
    /// Encodes raw coordinates [n, d] (stored flat) and runs the forward pass.
    ad::Var forward(const Bound& bound, std::span<const double> coords) const;

    /// Gradient-free evaluation; returns [n, output_dim] row-major.
    std::vector<double> evaluate(std::span<const double> coords) const;

private:
    SirenConfig cfg_;
    std::size_t output_dim_ = 0;
    std::vector<Layer> layers_;
    std::vector<double> params_;
};

/// Checkpoint layout (all little-endian):
///   char[4] "INRS", u32 version (1),
///   u32 input_dim, u32 num_frequencies, f64 sigma,
///   u32 hidden_width, u32 num_hidden, u32 skip_index, u32 output_dim,
///   f64 omega, f64 init_c, f64 last_layer_bound,
///   u32 num_layers, then (u32 in, u32 out) per layer,
///   u64 parameter_count, f64 parameters[parameter_count].
void write_checkpoint(std::ostream& os, const SirenNetwork& net);
SirenNetwork read_checkpoint(std::istream& is);
void save_checkpoint(const std::string& path, const SirenNetwork& net);
SirenNetwork load_checkpoint(const std::string& path);

}  // namespace inreg
