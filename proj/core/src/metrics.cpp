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

#include "inreg/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace inreg {

Mask Mask::from_image(const Image& img) {
    Mask m(img.height, img.width);
    for (std::size_t p = 0; p < img.pixels(); ++p) m.data[p] = img.data[p * img.channels] >= 0.5 ? 1 : 0;
    return m;
}

Image Mask::to_image() const {
    Image img(height, width, 1);
    for (std::size_t p = 0; p < data.size(); ++p) img.data[p] = data[p] ? 1.0 : 0.0;
    return img;
}

std::size_t Mask::count() const { return static_cast<std::size_t>(std::count(data.begin(), data.end(), 1)); }

double dice(const Mask& a, const Mask& b) {
    if (a.height != b.height || a.width != b.width) {
        throw ShapeError("dice", Shape{a.height, a.width}, Shape{b.height, b.width});
    }
    std::size_t both = 0;
    for (std::size_t p = 0; p < a.data.size(); ++p) both += (a.data[p] && b.data[p]) ? 1 : 0;
    const std::size_t total = a.count() + b.count();
    if (total == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

Mask warp_mask(const Mask& mask, const DisplacementField& field) {
    if (mask.height != field.height || mask.width != field.width) {
        throw ShapeError("warp_mask", Shape{mask.height, mask.width}, Shape{field.height, field.width});
    }
    Image warped = warp_image(mask.to_image(), field);
    return Mask::from_image(warped);
}

namespace {

std::vector<double> gaussian_window(const SsimConfig& cfg) {
    std::vector<double> w(cfg.window);
    const double c = (static_cast<double>(cfg.window) - 1.0) / 2.0;
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.window; ++i) {
        const double d = static_cast<double>(i) - c;
        w[i] = std::exp(-d * d / (2.0 * cfg.sigma * cfg.sigma));
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

// Separable "valid" filtering of one channel: output is (H-k+1) x (W-k+1).
std::vector<double> filter_valid(const std::vector<double>& img, std::size_t h, std::size_t w,
                                 const std::vector<double>& k) {
    const std::size_t n = k.size();
    const std::size_t ow = w - n + 1;
    const std::size_t oh = h - n + 1;
    std::vector<double> rows(h * ow, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < ow; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += k[t] * img[i * w + j + t];
            rows[i * ow + j] = s;
        }
    }
    std::vector<double> out(oh * ow, 0.0);
    for (std::size_t i = 0; i < oh; ++i) {
        for (std::size_t j = 0; j < ow; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += k[t] * rows[(i + t) * ow + j];
            out[i * ow + j] = s;
        }
    }
    return out;
}

}  // namespace

double ssim(const Image& a, const Image& b, const SsimConfig& cfg) {
    if (a.shape() != b.shape()) throw ShapeError("ssim", a.shape(), b.shape());
    if (a.height < cfg.window || a.width < cfg.window) {
        throw ShapeError("ssim", a.shape(), Shape{cfg.window, cfg.window});
    }
    const auto kernel = gaussian_window(cfg);
    const double c1 = std::pow(cfg.k1 * cfg.data_range, 2);
    const double c2 = std::pow(cfg.k2 * cfg.data_range, 2);
    const std::size_t h = a.height;
    const std::size_t w = a.width;
    double total = 0.0;
    for (std::size_t ch = 0; ch < a.channels; ++ch) {
        std::vector<double> x(h * w), y(h * w), xx(h * w), yy(h * w), xy(h * w);
        for (std::size_t p = 0; p < h * w; ++p) {
            x[p] = a.data[p * a.channels + ch];
            y[p] = b.data[p * b.channels + ch];
            xx[p] = x[p] * x[p];
            yy[p] = y[p] * y[p];
            xy[p] = x[p] * y[p];
        }
        const auto mx = filter_valid(x, h, w, kernel);
        const auto my = filter_valid(y, h, w, kernel);
        const auto sxx = filter_valid(xx, h, w, kernel);
        const auto syy = filter_valid(yy, h, w, kernel);
        const auto sxy = filter_valid(xy, h, w, kernel);
        double sum = 0.0;
        for (std::size_t p = 0; p < mx.size(); ++p) {
            const double vx = sxx[p] - mx[p] * mx[p];
            const double vy = syy[p] - my[p] * my[p];
            const double cxy = sxy[p] - mx[p] * my[p];
            sum += ((2.0 * mx[p] * my[p] + c1) * (2.0 * cxy + c2)) /
                   ((mx[p] * mx[p] + my[p] * my[p] + c1) * (vx + vy + c2));
        }
        total += sum / static_cast<double>(mx.size());
    }
    return total / static_cast<double>(a.channels);
}

double folding_pct(std::span<const double> det) {
    if (det.empty()) return 0.0;
    const auto folded = std::count_if(det.begin(), det.end(), [](double d) { return d <= 0.0; });
    return 100.0 * static_cast<double>(folded) / static_cast<double>(det.size());
}

}  // namespace inreg
