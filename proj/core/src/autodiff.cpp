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

#include "inreg/autodiff.hpp"

#include "fastmath.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace inreg {

std::string shape_to_string(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ", ";
        os << shape[i];
    }
    os << ']';
    return os.str();
}

ShapeError::ShapeError(std::string op, Shape lhs, Shape rhs)
    : Error(op + ": shape mismatch " + shape_to_string(lhs) + " vs " + shape_to_string(rhs)),
      op_(std::move(op)),
      lhs_(std::move(lhs)),
      rhs_(std::move(rhs)) {}

IoError::IoError(std::string path, const std::string& what)
    : Error(path + ": " + what), path_(std::move(path)) {}

}  // namespace inreg

namespace inreg::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::RowVectorXd>;
using MutVecMap = Eigen::Map<Eigen::RowVectorXd>;

void same_tape(const char* op, Var a, Var b) {
    if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
        throw Error(std::string(op) + ": operands live on different tapes");
    }
}

void require_rank2(const char* op, Var x) {
    if (x.shape().size() != 2) {
        throw ShapeError(op, x.shape(), Shape{0, 0});
    }
}

// Result shape of a broadcast binary op; throws if the operands do not conform.
Shape broadcast_shape(const char* op, const Shape& a, const Shape& b) {
    if (a == b) return a;
    auto is_tail = [](const Shape& big, const Shape& small) {
        return small.size() + 1 == big.size() && std::equal(small.begin(), small.end(), big.begin() + 1);
    };
    if (b.empty() || is_tail(a, b)) return a;
    if (a.empty() || is_tail(b, a)) return b;
    throw ShapeError(op, a, b);
}

template <class F, class DA, class DB>
Var binary(const char* op, Var a, Var b, F f, DA da, DB db) {
    same_tape(op, a, b);
    Tape& tape = a.tape();
    Shape out_shape = broadcast_shape(op, a.shape(), b.shape());
    const std::size_t n = shape_size(out_shape);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    auto av = a.value();
    auto bv = b.value();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(av[i % na], bv[i % nb]);
    return tape.record(op, std::move(out_shape), std::move(out), {a, b},
                       [a, b, n, na, nb, da, db](Tape& t, std::span<const double> g) {
                           auto av = t.value(a);
                           auto bv = t.value(b);
                           if (auto ga = t.grad_sink(a); !ga.empty()) {
                               for (std::size_t i = 0; i < n; ++i) ga[i % na] += g[i] * da(av[i % na], bv[i % nb]);
                           }
                           if (auto gb = t.grad_sink(b); !gb.empty()) {
                               for (std::size_t i = 0; i < n; ++i) gb[i % nb] += g[i] * db(av[i % na], bv[i % nb]);
                           }
                       });
}

// f(x) forward, df(x) derivative evaluated at the input.
template <class F, class DF>
Var unary(const char* op, Var x, F f, DF df) {
    Tape& tape = x.tape();
    auto xv = x.value();
    std::vector<double> out(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) out[i] = f(xv[i]);
    return tape.record(op, x.shape(), std::move(out), {x},
                       [x, df](Tape& t, std::span<const double> g) {
                           auto gx = t.grad_sink(x);
                           if (gx.empty()) return;
                           auto xv = t.value(x);
                           for (std::size_t i = 0; i < xv.size(); ++i) gx[i] += g[i] * df(xv[i]);
                       });
}

}  // namespace

std::size_t shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

// ---------------------------------------------------------------- Var

Tape& Var::tape() const {
    if (!tape_) throw Error("use of an empty Var");
    return *tape_;
}
const Shape& Var::shape() const { return tape().shape(*this); }
std::size_t Var::size() const { return shape_size(shape()); }
std::size_t Var::rows() const { return shape().at(0); }
std::size_t Var::cols() const { return shape().at(1); }
bool Var::requires_grad() const { return tape().requires_grad(*this); }
std::span<const double> Var::value() const { return tape().value(*this); }
std::span<const double> Var::grad() const { return tape().grad(*this); }

double Var::item() const {
    auto v = value();
    if (v.size() != 1) throw ShapeError("item", shape(), Shape{});
    return v[0];
}

// ---------------------------------------------------------------- Tape

const Tape::Node& Tape::node(Var v) const {
    if (v.tape_ != this || v.id_ >= nodes_.size()) throw Error("Var does not belong to this tape");
    return nodes_[v.id_];
}

Tape::Node& Tape::node(Var v) {
    if (v.tape_ != this || v.id_ >= nodes_.size()) throw Error("Var does not belong to this tape");
    return nodes_[v.id_];
}

Var Tape::leaf(Shape shape, std::vector<double> data, bool requires_grad) {
    if (shape_size(shape) != data.size()) {
        throw ShapeError("leaf", shape, Shape{data.size()});
    }
    Node n;
    n.op = requires_grad ? "leaf" : "constant";
    n.shape = std::move(shape);
    n.value = std::move(data);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Shape shape, std::vector<double> data) {
    return leaf(std::move(shape), std::move(data), false);
}

Var Tape::scalar(double value) { return constant({}, {value}); }

Var Tape::record(std::string_view op, Shape shape, std::vector<double> value, std::vector<Var> parents,
                 BackwardFn backward) {
    if (shape_size(shape) != value.size()) {
        throw ShapeError(std::string(op), shape, Shape{value.size()});
    }
    if (finite_checks_) {
        for (double v : value) {
            if (!std::isfinite(v)) {
                throw NumericalError(std::string(op) + ": non-finite value in forward pass");
            }
        }
    }
    Node n;
    n.op = std::string(op);
    n.shape = std::move(shape);
    n.value = std::move(value);
    for (Var p : parents) {
        const Node& pn = node(p);
        n.requires_grad = n.requires_grad || pn.requires_grad;
        n.parents.push_back(p.id_);
    }
    if (n.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var root) {
    Node& r = node(root);
    if (!r.shape.empty()) throw ShapeError("backward", r.shape, Shape{});
    if (!r.requires_grad) throw Error("backward: root does not require a gradient");
    if (backward_done_) throw Error("backward: gradients already computed; call zero_grad() first");
    backward_done_ = true;

    for (std::size_t i = 0; i <= root.id_; ++i) {
        Node& n = nodes_[i];
        if (n.requires_grad) n.grad.assign(n.value.size(), 0.0);
    }
    r.grad[0] = 1.0;
    for (std::size_t i = root.id_ + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.backward) n.backward(*this, n.grad);
    }
}

void Tape::zero_grad() {
    for (Node& n : nodes_) n.grad.clear();
    backward_done_ = false;
}

void Tape::clear() {
    nodes_.clear();
    backward_done_ = false;
}

std::span<double> Tape::grad_sink(Var v) {
    Node& n = node(v);
    if (!n.requires_grad) return {};
    if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
    return n.grad;
}

std::optional<std::size_t> Tape::first_non_finite() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (double v : nodes_[i].value) {
            if (!std::isfinite(v)) return i;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- elementwise

Var operator+(Var a, Var b) {
    return binary("add", a, b, [](double x, double y) { return x + y; },
                  [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Var operator-(Var a, Var b) {
    return binary("sub", a, b, [](double x, double y) { return x - y; },
                  [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Var operator*(Var a, Var b) {
    return binary("mul", a, b, [](double x, double y) { return x * y; },
                  [](double, double y) { return y; }, [](double x, double) { return x; });
}

Var operator/(Var a, Var b) {
    return binary("div", a, b, [](double x, double y) { return x / y; },
                  [](double, double y) { return 1.0 / y; }, [](double x, double y) { return -x / (y * y); });
}

Var operator-(Var a) {
    return unary("neg", a, [](double x) { return -x; }, [](double) { return -1.0; });
}

Var operator+(Var a, double s) {
    return unary("add_scalar", a, [s](double x) { return x + s; }, [](double) { return 1.0; });
}
Var operator+(double s, Var a) { return a + s; }
Var operator-(Var a, double s) { return a + (-s); }
Var operator-(double s, Var a) {
    return unary("rsub_scalar", a, [s](double x) { return s - x; }, [](double) { return -1.0; });
}
Var operator*(Var a, double s) {
    return unary("mul_scalar", a, [s](double x) { return x * s; }, [s](double) { return s; });
}
Var operator*(double s, Var a) { return a * s; }
Var operator/(Var a, double s) {
    return unary("div_scalar", a, [s](double x) { return x / s; }, [s](double) { return 1.0 / s; });
}

namespace {

Var sine_impl(const char* op, Var x, double omega) {
    auto xv = x.value();
    std::vector<double> out(xv.size());
    std::vector<double> cosine(xv.size());
    detail::sincos_scaled(xv.data(), omega, out.data(), cosine.data(), xv.size());
    return x.tape().record(op, x.shape(), std::move(out), {x},
                           [x, omega, cosine = std::move(cosine)](Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[i] * omega * cosine[i];
                           });
}

}  // namespace

Var sin(Var x) { return sine_impl("sin", x, 1.0); }

Var sine(Var x, double omega) { return sine_impl("sine", x, omega); }

Var tanh(Var x) {
    return unary("tanh", x, [](double v) { return std::tanh(v); },
                 [](double v) {
                     const double t = std::tanh(v);
                     return 1.0 - t * t;
                 });
}

Var abs(Var x) {
    return unary("abs", x, [](double v) { return std::abs(v); },
                 [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

Var square(Var x) {
    return unary("square", x, [](double v) { return v * v; }, [](double v) { return 2.0 * v; });
}

Var sqrt(Var x) {
    return unary("sqrt", x, [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; },
                 [](double v) { return v > 0.0 ? 0.5 / std::sqrt(v) : 0.0; });
}

// ---------------------------------------------------------------- reductions

Var sum(Var x) {
    auto xv = x.value();
    double s = 0.0;
    for (double v : xv) s += v;
    return x.tape().record("sum", {}, {s}, {x}, [x](Tape& t, std::span<const double> g) {
        auto gx = t.grad_sink(x);
        for (double& v : gx) v += g[0];
    });
}

Var mean(Var x) {
    const double n = static_cast<double>(x.size());
    auto xv = x.value();
    double s = 0.0;
    for (double v : xv) s += v;
    return x.tape().record("mean", {}, {s / n}, {x}, [x, n](Tape& t, std::span<const double> g) {
        auto gx = t.grad_sink(x);
        const double d = g[0] / n;
        for (double& v : gx) v += d;
    });
}

Var row_mean(Var x) {
    require_rank2("row_mean", x);
    const std::size_t n = x.rows();
    const std::size_t k = x.cols();
    auto xv = x.value();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += xv[i * k + j];
        out[i] = s / static_cast<double>(k);
    }
    return x.tape().record("row_mean", {n, 1}, std::move(out), {x},
                           [x, n, k](Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               const double inv = 1.0 / static_cast<double>(k);
                               for (std::size_t i = 0; i < n; ++i) {
                                   for (std::size_t j = 0; j < k; ++j) gx[i * k + j] += g[i] * inv;
                               }
                           });
}

// ---------------------------------------------------------------- linear algebra

Var matmul(Var a, Var b) {
    same_tape("matmul", a, b);
    if (a.shape().size() != 2 || b.shape().size() != 2 || a.cols() != b.rows()) {
        throw ShapeError("matmul", a.shape(), b.shape());
    }
    const auto n = static_cast<Eigen::Index>(a.rows());
    const auto k = static_cast<Eigen::Index>(a.cols());
    const auto m = static_cast<Eigen::Index>(b.cols());
    std::vector<double> out(static_cast<std::size_t>(n * m));
    MutMap(out.data(), n, m).noalias() = ConstMap(a.value().data(), n, k) * ConstMap(b.value().data(), k, m);
    return a.tape().record(
        "matmul", {a.rows(), b.cols()}, std::move(out), {a, b}, [a, b, n, k, m](Tape& t, std::span<const double> g) {
            ConstMap G(g.data(), n, m);
            if (auto ga = t.grad_sink(a); !ga.empty()) {
                MutMap(ga.data(), n, k).noalias() += G * ConstMap(t.value(b).data(), k, m).transpose();
            }
            if (auto gb = t.grad_sink(b); !gb.empty()) {
                MutMap(gb.data(), k, m).noalias() += ConstMap(t.value(a).data(), n, k).transpose() * G;
            }
        });
}

Var linear(Var x, Var w, Var b) {
    same_tape("linear", x, w);
    same_tape("linear", x, b);
    if (x.shape().size() != 2 || w.shape().size() != 2 || x.cols() != w.cols()) {
        throw ShapeError("linear", x.shape(), w.shape());
    }
    if (b.shape() != Shape{w.rows()}) throw ShapeError("linear", w.shape(), b.shape());
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto in = static_cast<Eigen::Index>(x.cols());
    const auto out_dim = static_cast<Eigen::Index>(w.rows());
    std::vector<double> out(static_cast<std::size_t>(n * out_dim));
    MutMap Y(out.data(), n, out_dim);
    Y.noalias() = ConstMap(x.value().data(), n, in) * ConstMap(w.value().data(), out_dim, in).transpose();
    Y.rowwise() -= ConstVecMap(b.value().data(), out_dim);
    return x.tape().record(
        "linear", {x.rows(), w.rows()}, std::move(out), {x, w, b},
        [x, w, b, n, in, out_dim](Tape& t, std::span<const double> g) {
            ConstMap G(g.data(), n, out_dim);
            if (auto gx = t.grad_sink(x); !gx.empty()) {
                MutMap(gx.data(), n, in).noalias() += G * ConstMap(t.value(w).data(), out_dim, in);
            }
            if (auto gw = t.grad_sink(w); !gw.empty()) {
                MutMap(gw.data(), out_dim, in).noalias() += G.transpose() * ConstMap(t.value(x).data(), n, in);
            }
            if (auto gb = t.grad_sink(b); !gb.empty()) {
                std::vector<double> col(static_cast<std::size_t>(out_dim), 0.0);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double* row = g.data() + i * out_dim;
                    for (Eigen::Index j = 0; j < out_dim; ++j) col[static_cast<std::size_t>(j)] += row[j];
                }
                for (std::size_t j = 0; j < col.size(); ++j) gb[j] -= col[j];
            }
        });
}

// ---------------------------------------------------------------- structural

Var slice_cols(Var x, std::size_t begin, std::size_t end) {
    require_rank2("slice_cols", x);
    const std::size_t n = x.rows();
    const std::size_t k = x.cols();
    if (begin >= end || end > k) throw ShapeError("slice_cols", x.shape(), Shape{begin, end});
    const std::size_t w = end - begin;
    auto xv = x.value();
    std::vector<double> out(n * w);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(xv.begin() + static_cast<std::ptrdiff_t>(i * k + begin), w,
                    out.begin() + static_cast<std::ptrdiff_t>(i * w));
    }
    return x.tape().record("slice_cols", {n, w}, std::move(out), {x},
                           [x, n, k, w, begin](Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               for (std::size_t i = 0; i < n; ++i) {
                                   for (std::size_t j = 0; j < w; ++j) gx[i * k + begin + j] += g[i * w + j];
                               }
                           });
}

Var concat_cols(Var a, Var b) {
    same_tape("concat_cols", a, b);
    require_rank2("concat_cols", a);
    require_rank2("concat_cols", b);
    if (a.rows() != b.rows()) throw ShapeError("concat_cols", a.shape(), b.shape());
    const std::size_t n = a.rows();
    const std::size_t p = a.cols();
    const std::size_t q = b.cols();
    auto av = a.value();
    auto bv = b.value();
    std::vector<double> out(n * (p + q));
    for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(av.begin() + static_cast<std::ptrdiff_t>(i * p), p,
                    out.begin() + static_cast<std::ptrdiff_t>(i * (p + q)));
        std::copy_n(bv.begin() + static_cast<std::ptrdiff_t>(i * q), q,
                    out.begin() + static_cast<std::ptrdiff_t>(i * (p + q) + p));
    }
    return a.tape().record("concat_cols", {n, p + q}, std::move(out), {a, b},
                           [a, b, n, p, q](Tape& t, std::span<const double> g) {
                               if (auto ga = t.grad_sink(a); !ga.empty()) {
                                   for (std::size_t i = 0; i < n; ++i) {
                                       for (std::size_t j = 0; j < p; ++j) ga[i * p + j] += g[i * (p + q) + j];
                                   }
                               }
                               if (auto gb = t.grad_sink(b); !gb.empty()) {
                                   for (std::size_t i = 0; i < n; ++i) {
                                       for (std::size_t j = 0; j < q; ++j) gb[i * q + j] += g[i * (p + q) + p + j];
                                   }
                               }
                           });
}

Var reshape(Var x, Shape shape) {
    if (shape_size(shape) != x.size()) throw ShapeError("reshape", x.shape(), shape);
    auto xv = x.value();
    return x.tape().record("reshape", std::move(shape), std::vector<double>(xv.begin(), xv.end()), {x},
                           [x](Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                           });
}

Var gather(Var x, std::vector<std::size_t> index) {
    const std::size_t n = x.size();
    auto xv = x.value();
    std::vector<double> out(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= n) throw ShapeError("gather", x.shape(), Shape{index[i]});
        out[i] = xv[index[i]];
    }
    Shape shape{index.size()};
    return x.tape().record("gather", std::move(shape), std::move(out), {x},
                           [x, index = std::move(index)](Tape& t, std::span<const double> g) {
                               auto gx = t.grad_sink(x);
                               for (std::size_t i = 0; i < index.size(); ++i) gx[index[i]] += g[i];
                           });
}

}  // namespace inreg::ad
