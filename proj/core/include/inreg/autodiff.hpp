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

// Define-by-run reverse-mode automatic differentiation over dense
// row-major tensors of doubles.
//
// A Tape owns every node recorded during one forward pass. Var is a cheap
// handle (tape pointer + node index). Nodes are appended in evaluation
// order, so the tape is always topologically sorted and backward() is a
// single reverse sweep.
//
// Broadcasting is limited to two cases: a rank-0 operand, or an operand
// whose shape equals the other's shape with the leading (batch) extent
// removed.

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inreg/error.hpp"

namespace inreg::ad {

class Tape;

class Var {
public:
    Var() = default;

    bool valid() const noexcept { return tape_ != nullptr; }
    Tape& tape() const;
    std::size_t id() const noexcept { return id_; }

    const Shape& shape() const;
    std::size_t size() const;
    std::size_t rows() const;  // extent 0 of a rank-2 tensor
    std::size_t cols() const;  // extent 1 of a rank-2 tensor
    bool requires_grad() const;

    std::span<const double> value() const;
    /// Empty until backward() has run on a graph that reaches this node.
    std::span<const double> grad() const;
    /// Value of a single-element tensor.
    double item() const;

private:
    friend class Tape;
    Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    std::size_t id_ = 0;
};

/// Receives the gradient flowing into a node and accumulates into parents
/// through Tape::grad_sink().
using BackwardFn = std::function<void(Tape&, std::span<const double> out_grad)>;

class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Shape shape, std::vector<double> data, bool requires_grad = true);
    Var constant(Shape shape, std::vector<double> data);
    Var scalar(double value);

    /// Appends a primitive. requires_grad is inherited from the parents; when
    /// no parent needs a gradient the backward closure is dropped.
    Var record(std::string_view op, Shape shape, std::vector<double> value,
               std::vector<Var> parents, BackwardFn backward);

    /// Propagates d(root)/d(node) to every requires_grad node. Calling it a
    /// second time without zero_grad() throws.
    void backward(Var root);
    void zero_grad();
    void clear();

    /// Gradient buffer of `v`, zero-filled on first access. Empty when `v`
    /// does not require a gradient.
    std::span<double> grad_sink(Var v);

    const Shape& shape(Var v) const { return node(v).shape; }
    std::span<const double> value(Var v) const { return node(v).value; }
    std::span<const double> grad(Var v) const { return node(v).grad; }
    bool requires_grad(Var v) const { return node(v).requires_grad; }
    const std::string& op_name(Var v) const { return node(v).op; }

    std::size_t size() const noexcept { return nodes_.size(); }

    /// When enabled (default), record() throws NumericalError on any
    /// non-finite forward value.
    void set_finite_checks(bool enabled) noexcept { finite_checks_ = enabled; }
    bool finite_checks() const noexcept { return finite_checks_; }

    /// Index of the first node holding a NaN/Inf value, if any.
    std::optional<std::size_t> first_non_finite() const;

private:
    struct Node {
        std::string op;
        Shape shape;
        std::vector<double> value;
        std::vector<double> grad;
        bool requires_grad = false;
        std::vector<std::size_t> parents;
        BackwardFn backward;
    };

    const Node& node(Var v) const;
    Node& node(Var v);

    std::deque<Node> nodes_;
    bool backward_done_ = false;
    bool finite_checks_ = true;
};

std::size_t shape_size(const Shape& shape);

// Elementwise arithmetic (with the limited broadcasting described above).
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);

Var operator+(Var a, double s);
Var operator+(double s, Var a);
Var operator-(Var a, double s);
Var operator-(double s, Var a);
Var operator*(Var a, double s);
Var operator*(double s, Var a);
Var operator/(Var a, double s);

Var sin(Var x);
/// sin(omega * x) as a single node.
Var sine(Var x, double omega);
Var tanh(Var x);
/// Backward at exactly 0 is 0.
Var abs(Var x);
Var square(Var x);
/// sqrt(max(x, 0)); backward is 0 wherever x <= 0.
Var sqrt(Var x);

Var sum(Var x);
Var mean(Var x);
/// [n, k] -> [n, 1] mean across columns.
Var row_mean(Var x);

/// [n, k] x [k, m] -> [n, m].
Var matmul(Var a, Var b);
/// x [n, in], w [out, in], b [out] -> x * w^T - b.
Var linear(Var x, Var w, Var b);

Var slice_cols(Var x, std::size_t begin, std::size_t end);
Var concat_cols(Var a, Var b);
Var reshape(Var x, Shape shape);
/// out[i] = x[index[i]]; index must be in range.
Var gather(Var x, std::vector<std::size_t> index);

}  // namespace inreg::ad
