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

#include "inreg/warp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"

namespace inreg {

CoordinateGrid CoordinateGrid::make(std::size_t height, std::size_t width) {
    if (height < 2 || width < 2) throw ShapeError("CoordinateGrid", Shape{height, width}, Shape{2, 2});
    CoordinateGrid g;
    g.height = height;
    g.width = width;
    g.coords.resize(height * width * 2);
    for (std::size_t i = 0; i < height; ++i) {
        const double y = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(height - 1);
        for (std::size_t j = 0; j < width; ++j) {
            const double x = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(width - 1);
            g.coords[2 * (i * width + j)] = x;
            g.coords[2 * (i * width + j) + 1] = y;
        }
    }
    return g;
}

DisplacementField DisplacementField::zero(std::size_t height, std::size_t width) {
    return DisplacementField{height, width, std::vector<double>(height * width * 2, 0.0)};
}

std::vector<double> DisplacementField::transformed_points() const {
    auto grid = CoordinateGrid::make(height, width);
    for (std::size_t k = 0; k < grid.coords.size(); ++k) grid.coords[k] += delta[k];
    return std::move(grid.coords);
}

std::vector<double> DisplacementField::in_pixels() const {
    std::vector<double> px(delta.size());
    const double sx = static_cast<double>(width - 1) / 2.0;
    const double sy = static_cast<double>(height - 1) / 2.0;
    for (std::size_t p = 0; p < size(); ++p) {
        px[2 * p] = delta[2 * p] * sx;
        px[2 * p + 1] = delta[2 * p + 1] * sy;
    }
    return px;
}

namespace {

void require_grid(const char* op, std::size_t height, std::size_t width) {
    if (height < 3 || width < 3) throw ShapeError(op, Shape{height, width}, Shape{3, 3});
}

// Continuous pixel position for one axis: clamped location, lower lattice
// index, fractional offset and d(position)/d(normalized coordinate).
struct AxisSample {
    std::size_t lo;
    double frac;
    double dpos;
};

AxisSample axis_sample(double coord, std::size_t extent) {
    if (extent == 1) return {0, 0.0, 0.0};
    const double last = static_cast<double>(extent - 1);
    const double scale = last / 2.0;
    double pos = (coord + 1.0) * scale;
    double dpos = scale;
    if (pos < 0.0) {
        pos = 0.0;
        dpos = 0.0;
    } else if (pos > last) {
        pos = last;
        dpos = 0.0;
    }
    // Snap round-off so grid-aligned points reproduce pixel values exactly.
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9) pos = r;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    lo = std::min(lo, extent - 2);
    return {lo, pos - static_cast<double>(lo), dpos};
}

std::size_t next(std::size_t lo, std::size_t extent) { return extent == 1 ? lo : lo + 1; }

// d/dx and d/dy finite-difference stencil for pixel (i, j) along one axis.
struct Stencil {
    std::size_t a;  // index subtracted
    std::size_t b;  // index added
    double scale;   // 1 / (b - a) / spacing
};

Stencil stencil(std::size_t k, std::size_t extent, double spacing) {
    if (k == 0) return {0, 1, 1.0 / spacing};
    if (k + 1 == extent) return {extent - 2, extent - 1, 1.0 / spacing};
    return {k - 1, k + 1, 0.5 / spacing};
}

}  // namespace

// ---------------------------------------------------------------- differentiable

ad::Var bilinear_sample(ad::Var image, std::size_t height, std::size_t width, ad::Var points) {
    if (image.shape().size() != 2 || image.rows() != height * width || height == 0 || width == 0) {
        throw ShapeError("bilinear_sample", image.shape(), Shape{height * width, 0});
    }
    if (points.shape().size() != 2 || points.cols() != 2) {
        throw ShapeError("bilinear_sample", image.shape(), points.shape());
    }
    const std::size_t c = image.cols();
    const std::size_t n = points.rows();
    auto img = image.value();
    auto pts = points.value();
    std::vector<double> out(n * c);
    for (std::size_t p = 0; p < n; ++p) {
        const AxisSample sx = axis_sample(pts[2 * p], width);
        const AxisSample sy = axis_sample(pts[2 * p + 1], height);
        const std::size_t i00 = (sy.lo * width + sx.lo) * c;
        const std::size_t i01 = (sy.lo * width + next(sx.lo, width)) * c;
        const std::size_t i10 = (next(sy.lo, height) * width + sx.lo) * c;
        const std::size_t i11 = (next(sy.lo, height) * width + next(sx.lo, width)) * c;
        for (std::size_t ch = 0; ch < c; ++ch) {
            const double top = (1.0 - sx.frac) * img[i00 + ch] + sx.frac * img[i01 + ch];
            const double bottom = (1.0 - sx.frac) * img[i10 + ch] + sx.frac * img[i11 + ch];
            out[p * c + ch] = (1.0 - sy.frac) * top + sy.frac * bottom;
        }
    }
    return image.tape().record(
        "bilinear_sample", {n, c}, std::move(out), {image, points},
        [image, points, height, width, c, n](ad::Tape& t, std::span<const double> g) {
            auto img = t.value(image);
            auto pts = t.value(points);
            auto gimg = t.grad_sink(image);
            auto gpts = t.grad_sink(points);
            for (std::size_t p = 0; p < n; ++p) {
                const AxisSample sx = axis_sample(pts[2 * p], width);
                const AxisSample sy = axis_sample(pts[2 * p + 1], height);
                const std::size_t i00 = (sy.lo * width + sx.lo) * c;
                const std::size_t i01 = (sy.lo * width + next(sx.lo, width)) * c;
                const std::size_t i10 = (next(sy.lo, height) * width + sx.lo) * c;
                const std::size_t i11 = (next(sy.lo, height) * width + next(sx.lo, width)) * c;
                const double w00 = (1.0 - sx.frac) * (1.0 - sy.frac);
                const double w01 = sx.frac * (1.0 - sy.frac);
                const double w10 = (1.0 - sx.frac) * sy.frac;
                const double w11 = sx.frac * sy.frac;
                for (std::size_t ch = 0; ch < c; ++ch) {
                    const double go = g[p * c + ch];
                    if (!gimg.empty()) {
                        gimg[i00 + ch] += go * w00;
                        gimg[i01 + ch] += go * w01;
                        gimg[i10 + ch] += go * w10;
                        gimg[i11 + ch] += go * w11;
                    }
                    if (!gpts.empty()) {
                        const double dfx = (1.0 - sy.frac) * (img[i01 + ch] - img[i00 + ch]) +
                                           sy.frac * (img[i11 + ch] - img[i10 + ch]);
                        const double dfy = (1.0 - sx.frac) * (img[i10 + ch] - img[i00 + ch]) +
                                           sx.frac * (img[i11 + ch] - img[i01 + ch]);
                        gpts[2 * p] += go * dfx * sx.dpos;
                        gpts[2 * p + 1] += go * dfy * sy.dpos;
                    }
                }
            }
        });
}

ad::Var spatial_gradient(ad::Var values, std::size_t height, std::size_t width) {
    require_grid("spatial_gradient", height, width);
    if (values.shape().size() != 2 || values.rows() != height * width) {
        throw ShapeError("spatial_gradient", values.shape(), Shape{height * width, 0});
    }
    const std::size_t k = values.cols();
    const double hx = 2.0 / static_cast<double>(width - 1);
    const double hy = 2.0 / static_cast<double>(height - 1);
    auto v = values.value();
    std::vector<double> out(height * width * 2 * k);
    for (std::size_t i = 0; i < height; ++i) {
        const Stencil sy = stencil(i, height, hy);
        for (std::size_t j = 0; j < width; ++j) {
            const Stencil sx = stencil(j, width, hx);
            const std::size_t p = i * width + j;
            for (std::size_t ch = 0; ch < k; ++ch) {
                out[p * 2 * k + 2 * ch] = (v[(i * width + sx.b) * k + ch] - v[(i * width + sx.a) * k + ch]) * sx.scale;
                out[p * 2 * k + 2 * ch + 1] =
                    (v[(sy.b * width + j) * k + ch] - v[(sy.a * width + j) * k + ch]) * sy.scale;
            }
        }
    }
    return values.tape().record(
        "spatial_gradient", {height * width, 2 * k}, std::move(out), {values},
        [values, height, width, k, hx, hy](ad::Tape& t, std::span<const double> g) {
            auto gv = t.grad_sink(values);
            for (std::size_t i = 0; i < height; ++i) {
                const Stencil sy = stencil(i, height, hy);
                for (std::size_t j = 0; j < width; ++j) {
                    const Stencil sx = stencil(j, width, hx);
                    const std::size_t p = i * width + j;
                    for (std::size_t ch = 0; ch < k; ++ch) {
                        const double gx = g[p * 2 * k + 2 * ch] * sx.scale;
                        const double gy = g[p * 2 * k + 2 * ch + 1] * sy.scale;
                        gv[(i * width + sx.b) * k + ch] += gx;
                        gv[(i * width + sx.a) * k + ch] -= gx;
                        gv[(sy.b * width + j) * k + ch] += gy;
                        gv[(sy.a * width + j) * k + ch] -= gy;
                    }
                }
            }
        });
}

ad::Var jacobian_det(ad::Var delta, std::size_t height, std::size_t width) {
    require_grid("jacobian_det", height, width);
    if (delta.shape() != Shape{height * width, 2}) {
        throw ShapeError("jacobian_det", delta.shape(), Shape{height * width, 2});
    }
    // Columns: d(dx)/dx, d(dx)/dy, d(dy)/dx, d(dy)/dy.
    ad::Var g = spatial_gradient(delta, height, width);
    ad::Var a = 1.0 + ad::slice_cols(g, 0, 1);
    ad::Var b = ad::slice_cols(g, 1, 2);
    ad::Var c = ad::slice_cols(g, 2, 3);
    ad::Var d = 1.0 + ad::slice_cols(g, 3, 4);
    return a * d - b * c;
}

// ---------------------------------------------------------------- plain

std::vector<double> bilinear_sample(const Image& image, std::span<const double> points) {
    if (image.empty()) throw ShapeError("bilinear_sample", image.shape(), Shape{1, 1, 1});
    ad::Tape tape;
    ad::Var img = tape.constant({image.pixels(), image.channels}, image.data);
    ad::Var pts = tape.constant({points.size() / 2, 2}, {points.begin(), points.end()});
    ad::Var out = bilinear_sample(img, image.height, image.width, pts);
    return {out.value().begin(), out.value().end()};
}

Image warp_image(const Image& image, const DisplacementField& field) {
    if (image.height != field.height || image.width != field.width) {
        throw ShapeError("warp_image", image.shape(), Shape{field.height, field.width});
    }
    return Image(image.height, image.width, image.channels, bilinear_sample(image, field.transformed_points()));
}

std::vector<double> spatial_gradient(const Image& image) {
    ad::Tape tape;
    ad::Var v = tape.constant({image.pixels(), image.channels}, image.data);
    ad::Var g = spatial_gradient(v, image.height, image.width);
    return {g.value().begin(), g.value().end()};
}

std::vector<double> jacobian_det(const DisplacementField& field) {
    ad::Tape tape;
    ad::Var d = tape.constant({field.size(), 2}, field.delta);
    ad::Var det = jacobian_det(d, field.height, field.width);
    return {det.value().begin(), det.value().end()};
}

// ---------------------------------------------------------------- field file

namespace {
constexpr char kFieldMagic[4] = {'I', 'N', 'R', 'F'};
}

void write_field(std::ostream& os, const DisplacementField& field) {
    if (field.delta.size() != field.size() * 2) {
        throw ShapeError("write_field", Shape{field.height, field.width, 2}, Shape{field.delta.size()});
    }
    os.write(kFieldMagic, 4);
    detail::put_u32(os, static_cast<std::uint32_t>(field.height));
    detail::put_u32(os, static_cast<std::uint32_t>(field.width));
    for (double v : field.delta) detail::put_f32(os, static_cast<float>(v));
    if (!os) throw Error("write_field: stream error");
}

DisplacementField read_field(std::istream& is) {
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || !std::equal(magic, magic + 4, kFieldMagic)) throw Error("read_field: bad magic");
    DisplacementField f;
    f.height = detail::get_u32(is);
    f.width = detail::get_u32(is);
    if (f.height == 0 || f.width == 0 || f.height > (1u << 15) || f.width > (1u << 15)) {
        throw Error("read_field: implausible dimensions");
    }
    f.delta.resize(f.size() * 2);
    for (double& v : f.delta) v = static_cast<double>(detail::get_f32(is));
    return f;
}

void save_field(const std::string& path, const DisplacementField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(path, "cannot open for writing");
    write_field(os, field);
}

DisplacementField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(path, "cannot open for reading");
    try {
        return read_field(is);
    } catch (const Error& e) {
        throw IoError(path, e.what());
    }
}

}  // namespace inreg
