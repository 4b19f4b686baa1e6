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

#include "inreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace inreg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeWidth = 0.04;  // soft edge, normalized units

struct Ellipse {
    double cx = 0.0, cy = 0.0;
    double ax = 1.0, ay = 1.0;
    double angle = 0.0;
    double intensity = 0.0;

    // 1 on the boundary, < 1 inside.
    double radius(double x, double y) const {
        const double dx = x - cx;
        const double dy = y - cy;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double u = (c * dx + s * dy) / ax;
        const double v = (-s * dx + c * dy) / ay;
        return std::sqrt(u * u + v * v);
    }
    bool contains(double x, double y) const { return radius(x, y) < 1.0; }
    double profile(double x, double y) const {
        const double d = (radius(x, y) - 1.0) * 0.5 * (ax + ay);
        return 1.0 / (1.0 + std::exp(d / kEdgeWidth));
    }
};

struct Phantom {
    double background = 0.04;
    Ellipse tissue;
    std::vector<Ellipse> structures;
    std::vector<Ellipse> details;

    double operator()(double x, double y) const {
        double v = background + (tissue.intensity - background) * tissue.profile(x, y);
        for (const auto& e : structures) v += e.intensity * e.profile(x, y);
        for (const auto& e : details) v += e.intensity * e.profile(x, y);
        return std::clamp(v, 0.0, 1.0);
    }
};

// Divergence-free displacement u = (d psi / dy, -d psi / dx) from a
// sinusoidal stream function psi.
struct SmoothField {
    struct Mode {
        double kx, ky, px, py, weight;
    };
    std::vector<Mode> modes;
    double scale = 0.0;

    double dx(double x, double y) const {
        double s = 0.0;
        for (const auto& m : modes) {
            s += m.weight * kPi * m.ky * std::sin(kPi * m.kx * x + m.px) * std::cos(kPi * m.ky * y + m.py);
        }
        return scale * s;
    }
    double dy(double x, double y) const {
        double s = 0.0;
        for (const auto& m : modes) {
            s -= m.weight * kPi * m.kx * std::cos(kPi * m.kx * x + m.px) * std::sin(kPi * m.ky * y + m.py);
        }
        return scale * s;
    }
};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

Phantom make_phantom(Sampler& rng, std::size_t structures) {
    Phantom p;
    p.tissue = {rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05), rng.uniform(1.16, 1.24),
                rng.uniform(1.12, 1.20), rng.uniform(-0.3, 0.3), 0.30};
    for (std::size_t k = 0; k < structures; ++k) {
        const double r = rng.uniform(0.0, 0.45);
        const double t = rng.uniform(0.0, 2.0 * kPi);
        p.structures.push_back({p.tissue.cx + r * std::cos(t), p.tissue.cy + r * std::sin(t), rng.uniform(0.14, 0.26),
                                rng.uniform(0.12, 0.22), rng.uniform(0.0, kPi), rng.uniform(0.25, 0.45)});
    }
    for (std::size_t k = 0; k < 24; ++k) {
        const double r = rng.uniform(0.0, 1.0);
        const double t = rng.uniform(0.0, 2.0 * kPi);
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const double size = rng.uniform(0.05, 0.10);
        p.details.push_back({p.tissue.cx + r * std::cos(t), p.tissue.cy + r * std::sin(t), size, size, 0.0,
                             sign * rng.uniform(0.08, 0.15)});
    }
    return p;
}

SmoothField make_field(Sampler& rng) {
    SmoothField f;
    for (int k = 0; k < 3; ++k) {
        f.modes.push_back({rng.uniform(0.4, 0.9), rng.uniform(0.4, 0.9), rng.uniform(0.0, 2.0 * kPi),
                           rng.uniform(0.0, 2.0 * kPi), k == 0 ? 1.0 : 0.5});
    }
    return f;
}

}  // namespace

Mask dilate(const Mask& mask, std::size_t radius) {
    Mask out(mask.height, mask.width);
    const auto r = static_cast<std::ptrdiff_t>(radius);
    const auto h = static_cast<std::ptrdiff_t>(mask.height);
    const auto w = static_cast<std::ptrdiff_t>(mask.width);
    for (std::ptrdiff_t i = 0; i < h; ++i) {
        for (std::ptrdiff_t j = 0; j < w; ++j) {
            if (!mask.data[static_cast<std::size_t>(i * w + j)]) continue;
            for (std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, i - r); a <= std::min(h - 1, i + r); ++a) {
                for (std::ptrdiff_t b = std::max<std::ptrdiff_t>(0, j - r); b <= std::min(w - 1, j + r); ++b) {
                    out.data[static_cast<std::size_t>(a * w + b)] = 1;
                }
            }
        }
    }
    return out;
}

SyntheticPair make_synthetic_pair(const SyntheticConfig& cfg) {
    if (cfg.size < 16) throw Error("make_synthetic_pair: size must be >= 16");
    if (!(cfg.deform_amp >= 0.0) || !std::isfinite(cfg.deform_amp)) {
        throw Error("make_synthetic_pair: deform_amp must be finite and non-negative");
    }
    Sampler rng(cfg.seed);
    const Phantom phantom = make_phantom(rng, cfg.structures);
    SmoothField field = make_field(rng);

    const std::size_t n = cfg.size;
    const auto grid = CoordinateGrid::make(n, n);
    const double px_per_unit = static_cast<double>(n - 1) / 2.0;

    // Scale so that the largest grid displacement is deform_amp pixels.
    field.scale = 1.0;
    double peak = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double x = grid.coords[2 * p];
        const double y = grid.coords[2 * p + 1];
        peak = std::max(peak, std::hypot(field.dx(x, y), field.dy(x, y)) * px_per_unit);
    }
    field.scale = cfg.deform_amp > 0.0 ? cfg.deform_amp / peak : 0.0;

    SyntheticPair out;
    out.true_field = DisplacementField::zero(n, n);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        out.true_field.delta[2 * p] = field.dx(grid.coords[2 * p], grid.coords[2 * p + 1]);
        out.true_field.delta[2 * p + 1] = field.dy(grid.coords[2 * p], grid.coords[2 * p + 1]);
    }
    const auto det = jacobian_det(out.true_field);
    if (*std::min_element(det.begin(), det.end()) <= 0.0) {
        throw Error("make_synthetic_pair: deform_amp " + std::to_string(cfg.deform_amp) + " px folds the field");
    }

    // Pre-image of every moving pixel under Phi, by fixed-point iteration.
    std::vector<double> source(grid.coords.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double yx = grid.coords[2 * p];
        const double yy = grid.coords[2 * p + 1];
        double x = yx;
        double y = yy;
        for (int it = 0; it < 200; ++it) {
            const double nx = yx - field.dx(x, y);
            const double ny = yy - field.dy(x, y);
            const bool done = nx == x && ny == y;
            x = nx;
            y = ny;
            if (done) break;
        }
        source[2 * p] = x;
        source[2 * p + 1] = y;
    }

    out.fixed = Image(n, n, 1);
    out.moving = Image(n, n, 1);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        out.fixed.data[p] = phantom(grid.coords[2 * p], grid.coords[2 * p + 1]);
        out.moving.data[p] = phantom(source[2 * p], source[2 * p + 1]);
    }
    for (std::size_t k = 0; k < phantom.structures.size(); ++k) {
        LabelledMask fm{"structure_" + std::to_string(k), Mask(n, n)};
        LabelledMask mm{fm.name, Mask(n, n)};
        for (std::size_t p = 0; p < grid.size(); ++p) {
            fm.mask.data[p] = phantom.structures[k].contains(grid.coords[2 * p], grid.coords[2 * p + 1]) ? 1 : 0;
            mm.mask.data[p] = phantom.structures[k].contains(source[2 * p], source[2 * p + 1]) ? 1 : 0;
        }
        out.fixed_structures.push_back(std::move(fm));
        out.moving_structures.push_back(std::move(mm));
    }

    // Expression blobs live in moving space only.
    out.texture_mask = Mask(n, n);
    if (cfg.texture.count > 0) {
        std::vector<double> texture(grid.size(), 0.0);
        const double sigma = cfg.texture.sigma_px / px_per_unit;
        for (std::size_t k = 0; k < cfg.texture.count; ++k) {
            Ellipse inner = phantom.tissue;
            double cx = 0.0;
            double cy = 0.0;
            do {
                cx = rng.uniform(-1.0, 1.0);
                cy = rng.uniform(-1.0, 1.0);
            } while (inner.radius(cx, cy) > 0.75);
            const double amp = cfg.texture.contrast * rng.uniform(0.8, 1.2);
            for (std::size_t p = 0; p < grid.size(); ++p) {
                const double dx = grid.coords[2 * p] - cx;
                const double dy = grid.coords[2 * p + 1] - cy;
                texture[p] += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            }
        }
        for (std::size_t p = 0; p < grid.size(); ++p) {
            out.moving.data[p] = std::clamp(out.moving.data[p] + texture[p], 0.0, 1.0);
            out.texture_mask.data[p] = texture[p] >= 0.1 * cfg.texture.contrast ? 1 : 0;
        }
    }
    return out;
}

}  // namespace inreg
