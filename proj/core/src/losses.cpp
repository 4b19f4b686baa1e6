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

#include "inreg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inreg/warp.hpp"

namespace inreg {

void LossWeights::validate() const {
    for (double a : {cc_moved, cc_support, reg, rec, excl}) {
        if (!std::isfinite(a) || a < 0.0) throw Error("LossWeights: weights must be finite and non-negative");
    }
}

void LnccConfig::validate(std::size_t height, std::size_t width) const {
    if (window_h < 2 || window_w < 2 || window_h > height || window_w > width) {
        throw ShapeError("lncc_window", Shape{window_h, window_w}, Shape{height, width});
    }
    if (!(eps > 0.0)) throw Error("LnccConfig: eps must be positive");
}

namespace {

struct Window {
    std::ptrdiff_t lo;
    std::ptrdiff_t hi;
};

Window window(std::size_t w) {
    const auto half = static_cast<std::ptrdiff_t>(w / 2);
    return {-half, static_cast<std::ptrdiff_t>(w) - 1 - half};
}

// Separable clipped window sum over [H, W, K] data: out[p] = sum of in[q]
// for q - p within [lo, hi] on both axes.
std::vector<double> window_sum(std::span<const double> in, std::size_t height, std::size_t width, std::size_t k,
                               Window wy, Window wx) {
    const auto h = static_cast<std::ptrdiff_t>(height);
    const auto w = static_cast<std::ptrdiff_t>(width);
    std::vector<double> rows(in.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < h; ++i) {
        for (std::ptrdiff_t j = 0; j < w; ++j) {
            const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(0, j + wx.lo);
            const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(w - 1, j + wx.hi);
            for (std::size_t c = 0; c < k; ++c) {
                double s = 0.0;
                for (std::ptrdiff_t q = j0; q <= j1; ++q) s += in[static_cast<std::size_t>(i * w + q) * k + c];
                rows[static_cast<std::size_t>(i * w + j) * k + c] = s;
            }
        }
    }
    std::vector<double> out(in.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < h; ++i) {
        const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(0, i + wy.lo);
        const std::ptrdiff_t i1 = std::min<std::ptrdiff_t>(h - 1, i + wy.hi);
        for (std::ptrdiff_t j = 0; j < w; ++j) {
            for (std::size_t c = 0; c < k; ++c) {
                double s = 0.0;
                for (std::ptrdiff_t q = i0; q <= i1; ++q) s += rows[static_cast<std::size_t>(q * w + j) * k + c];
                out[static_cast<std::size_t>(i * w + j) * k + c] = s;
            }
        }
    }
    return out;
}

ad::Var as_luminance(ad::Var x) { return x.cols() == 1 ? x : ad::row_mean(x); }

void same_shape(const char* op, ad::Var a, ad::Var b) {
    if (a.shape() != b.shape()) throw ShapeError(op, a.shape(), b.shape());
}

ad::Var correlation(ad::Var cov, ad::Var var_a, ad::Var var_b, double eps) {
    return (cov + eps) / (ad::sqrt(var_a * var_b) + eps);
}

}  // namespace

ad::Var box_sum(ad::Var x, std::size_t height, std::size_t width, std::size_t window_h, std::size_t window_w) {
    if (x.shape().size() != 2 || x.rows() != height * width) {
        throw ShapeError("box_sum", x.shape(), Shape{height * width, 0});
    }
    const std::size_t k = x.cols();
    const Window wy = window(window_h);
    const Window wx = window(window_w);
    auto out = window_sum(x.value(), height, width, k, wy, wx);
    return x.tape().record("box_sum", x.shape(), std::move(out), {x},
                           [x, height, width, k, wy, wx](ad::Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               // Adjoint: the same clipped sum with the window reflected.
                               auto back = window_sum(g, height, width, k, {-wy.hi, -wy.lo}, {-wx.hi, -wx.lo});
                               for (std::size_t i = 0; i < back.size(); ++i) gx[i] += back[i];
                           });
}

ad::Var ncc(ad::Var a, ad::Var b, double eps) {
    same_shape("ncc", a, b);
    ad::Var da = a - ad::mean(a);
    ad::Var db = b - ad::mean(b);
    return correlation(ad::mean(da * db), ad::mean(da * da), ad::mean(db * db), eps);
}

ad::Var mean_lncc(ad::Var a, ad::Var b, std::size_t height, std::size_t width, const LnccConfig& cfg) {
    same_shape("lncc", a, b);
    cfg.validate(height, width);
    const std::size_t k = a.cols();
    // Pixels per clipped window.
    auto counts = window_sum(std::vector<double>(height * width * k, 1.0), height, width, k, window(cfg.window_h),
                             window(cfg.window_w));
    ad::Var n = a.tape().constant(a.shape(), std::move(counts));
    auto local_mean = [&](ad::Var x) { return box_sum(x, height, width, cfg.window_h, cfg.window_w) / n; };
    ad::Var mu_a = local_mean(a);
    ad::Var mu_b = local_mean(b);
    ad::Var cov = local_mean(a * b) - mu_a * mu_b;
    ad::Var var_a = local_mean(a * a) - mu_a * mu_a;
    ad::Var var_b = local_mean(b * b) - mu_b * mu_b;
    return ad::mean(correlation(cov, var_a, var_b, cfg.eps));
}

ad::Var loss_cc(ad::Var fixed, ad::Var warped, std::size_t height, std::size_t width, const LnccConfig& cfg) {
    same_shape("loss_cc", fixed, warped);
    ad::Var f = as_luminance(fixed);
    ad::Var t = as_luminance(warped);
    ad::Var global = ncc(f, t, cfg.eps);
    ad::Var local = mean_lncc(f, t, height, width, cfg);
    return 0.5 * ((1.0 - global) + (1.0 - local));
}

ad::Var loss_reg(ad::Var det) { return ad::mean(ad::abs(1.0 - det)); }

ad::Var loss_rec(ad::Var moving, ad::Var support, ad::Var residual) {
    same_shape("loss_rec", moving, support);
    same_shape("loss_rec", moving, residual);
    return ad::mean(ad::square(moving - support - residual));
}

ad::Var loss_excl(ad::Var grad_support, ad::Var grad_residual) {
    same_shape("loss_excl", grad_support, grad_residual);
    ad::Var gamma = ad::tanh(grad_support) * ad::tanh(grad_residual);
    return ad::sum(ad::abs(gamma)) / static_cast<double>(grad_support.rows());
}

ad::Var composite_loss(ad::Tape& tape, const LossTerms& terms, const LossWeights& weights) {
    weights.validate();
    ad::Var total = tape.scalar(0.0);
    auto add = [&](const char* name, ad::Var term, double alpha) {
        if (alpha == 0.0) return;
        if (!term.valid()) throw Error(std::string("composite_loss: term '") + name + "' has weight but was not computed");
        total = total + alpha * term;
    };
    add("cc_moved", terms.cc_moved, weights.cc_moved);
    add("cc_support", terms.cc_support, weights.cc_support);
    add("reg", terms.reg, weights.reg);
    add("rec", terms.rec, weights.rec);
    add("excl", terms.excl, weights.excl);
    return total;
}

// ---------------------------------------------------------------- plain

namespace {
ad::Var image_var(ad::Tape& tape, const Image& img) { return tape.constant({img.pixels(), img.channels}, img.data); }
}  // namespace

double loss_cc(const Image& fixed, const Image& warped, const LnccConfig& cfg) {
    if (fixed.shape() != warped.shape()) throw ShapeError("loss_cc", fixed.shape(), warped.shape());
    ad::Tape tape;
    return loss_cc(image_var(tape, fixed), image_var(tape, warped), fixed.height, fixed.width, cfg).item();
}

double ncc(const Image& a, const Image& b, double eps) {
    if (a.shape() != b.shape()) throw ShapeError("ncc", a.shape(), b.shape());
    ad::Tape tape;
    return ncc(as_luminance(image_var(tape, a)), as_luminance(image_var(tape, b)), eps).item();
}

double exclusion(const Image& support, const Image& residual) {
    if (support.shape() != residual.shape()) throw ShapeError("loss_excl", support.shape(), residual.shape());
    ad::Tape tape;
    ad::Var gs = spatial_gradient(image_var(tape, support), support.height, support.width);
    ad::Var gr = spatial_gradient(image_var(tape, residual), residual.height, residual.width);
    return loss_excl(gs, gr).item();
}

}  // namespace inreg
