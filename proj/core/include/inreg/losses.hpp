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

// Registration and decomposition objectives. Every function records onto
// the tape of its operands; grid-shaped tensors are [H*W, C].

#pragma once

#include <cstddef>

#include "inreg/autodiff.hpp"
#include "inreg/image.hpp"

namespace inreg {

/// Weights of the composite objective:
///   cc_moved * Lcc(F, T(M)) + cc_support * Lcc(F, T(M_S)) + reg * Lreg
///   + rec * Lrec + excl * Lexcl
struct LossWeights {
    double cc_moved = 1.0;
    double cc_support = 1.0;
    double reg = 1.0;
    double rec = 100.0;
    double excl = 1.0;

    void validate() const;
    friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

struct LnccConfig {
    std::size_t window_h = 32;
    std::size_t window_w = 32;
    /// Added to numerator and denominator of every correlation.
    double eps = 1e-5;

    void validate(std::size_t height, std::size_t width) const;
    friend bool operator==(const LnccConfig&, const LnccConfig&) = default;
};

/// Sum over a window x window_w neighborhood clipped at the image border.
/// The window covers offsets [-(w/2), w - 1 - w/2] along each axis.
ad::Var box_sum(ad::Var x, std::size_t height, std::size_t width, std::size_t window_h, std::size_t window_w);

/// Pearson correlation (cov + eps) / (sqrt(var_a * var_b) + eps) over all
/// pixels. Operands are [N, 1].
ad::Var ncc(ad::Var a, ad::Var b, double eps);

/// Per-pixel local correlation over the sliding window, averaged.
ad::Var mean_lncc(ad::Var a, ad::Var b, std::size_t height, std::size_t width, const LnccConfig& cfg);

/// 0.5 * [(1 - NCC) + (1 - mean LNCC)]. Multi-channel operands are reduced
/// to their channel mean first.
ad::Var loss_cc(ad::Var fixed, ad::Var warped, std::size_t height, std::size_t width, const LnccConfig& cfg);

/// mean |1 - det|.
ad::Var loss_reg(ad::Var det);

/// mean over pixels and channels of (M - M_S - M_R)^2.
ad::Var loss_rec(ad::Var moving, ad::Var support, ad::Var residual);

/// mean over pixels of sum |tanh(grad_S) * tanh(grad_R)|, operands from
/// spatial_gradient().
ad::Var loss_excl(ad::Var grad_support, ad::Var grad_residual);

/// Terms that were not computed are left default-constructed and must carry
/// a zero weight.
struct LossTerms {
    ad::Var cc_moved;
    ad::Var cc_support;
    ad::Var reg;
    ad::Var rec;
    ad::Var excl;
};

ad::Var composite_loss(ad::Tape& tape, const LossTerms& terms, const LossWeights& weights);

// Gradient-free evaluation on images.
double loss_cc(const Image& fixed, const Image& warped, const LnccConfig& cfg);
double ncc(const Image& a, const Image& b, double eps = 1e-5);
/// Mean per-pixel sum |Gamma| between the spatial gradients of two images.
double exclusion(const Image& support, const Image& residual);

}  // namespace inreg
