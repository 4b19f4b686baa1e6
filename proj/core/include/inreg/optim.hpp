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

/// Adam with decoupled weight decay:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
///   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
class AdamW {
public:
    struct Params {
        double learning_rate = 1e-4;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
        double weight_decay = 1e-2;

        friend bool operator==(const Params&, const Params&) = default;
    };

    AdamW() = default;
    AdamW(std::size_t parameter_count, Params params);

    /// Throws NumericalError on a non-finite gradient, leaving parameters
    /// and state untouched.
    void step(std::span<double> parameters, std::span<const double> gradients);

    const Params& params() const noexcept { return params_; }
    std::size_t step_count() const noexcept { return step_; }
    std::span<const double> first_moment() const noexcept { return m_; }
    std::span<const double> second_moment() const noexcept { return v_; }

private:
    Params params_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t step_ = 0;
};

}  // namespace inreg
