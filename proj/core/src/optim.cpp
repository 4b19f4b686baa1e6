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

#include "inreg/optim.hpp"

#include <cmath>
#include <string>

#include "inreg/error.hpp"

namespace inreg {

AdamW::AdamW(std::size_t parameter_count, Params params)
    : params_(params), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void AdamW::step(std::span<double> parameters, std::span<const double> gradients) {
    if (parameters.size() != m_.size() || gradients.size() != m_.size()) {
        throw ShapeError("adamw_step", Shape{parameters.size(), gradients.size()}, Shape{m_.size()});
    }
    for (std::size_t i = 0; i < gradients.size(); ++i) {
        if (!std::isfinite(gradients[i])) {
            throw NumericalError("adamw_step: non-finite gradient at parameter " + std::to_string(i));
        }
    }
    ++step_;
    const double b1 = params_.beta1;
    const double b2 = params_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    const double lr = params_.learning_rate;
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        const double g = gradients[i];
        m_[i] = b1 * m_[i] + (1.0 - b1) * g;
        v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
        const double m_hat = m_[i] / c1;
        const double v_hat = v_[i] / c2;
        parameters[i] -= lr * (m_hat / (std::sqrt(v_hat) + params_.epsilon) + params_.weight_decay * parameters[i]);
    }
}

}  // namespace inreg
