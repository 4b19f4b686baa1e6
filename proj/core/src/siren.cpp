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

#include "inreg/siren.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "binary_io.hpp"

namespace inreg {

void SirenConfig::validate() const {
    encoding.validate();
    if (hidden_width < 1) throw Error("SirenConfig: hidden_width must be >= 1");
    if (num_hidden < 1) throw Error("SirenConfig: num_hidden must be >= 1");
    if (skip_index > num_hidden) throw Error("SirenConfig: skip_index exceeds num_hidden");
    if (!(omega > 0.0)) throw Error("SirenConfig: omega must be positive");
    if (!(init_c > 0.0)) throw Error("SirenConfig: init_c must be positive");
}

double SirenConfig::hidden_bound() const {
    return std::sqrt(init_c / (static_cast<double>(hidden_width) * omega * omega));
}

double SirenConfig::output_bound() const { return last_layer_bound > 0.0 ? last_layer_bound : hidden_bound(); }

SirenNetwork::SirenNetwork(SirenConfig cfg, std::size_t output_dim) : cfg_(std::move(cfg)), output_dim_(output_dim) {
    cfg_.validate();
    if (output_dim_ < 1) throw Error("SirenNetwork: output_dim must be >= 1");
    const std::size_t input = cfg_.encoding.network_input_dim();
    std::size_t offset = 0;
    std::size_t in = input;
    for (std::size_t l = 1; l <= cfg_.num_hidden + 1; ++l) {
        Layer layer;
        layer.in = in;
        layer.out = l <= cfg_.num_hidden ? cfg_.hidden_width : output_dim_;
        layer.weight_offset = offset;
        offset += layer.in * layer.out;
        layer.bias_offset = offset;
        offset += layer.out;
        layers_.push_back(layer);
        in = layer.out + (l == cfg_.skip_index ? input : 0);
    }
    params_.assign(offset, 0.0);
}

SirenNetwork SirenNetwork::init(std::uint64_t seed, std::size_t output_dim, const SirenConfig& cfg) {
    SirenNetwork net(cfg, output_dim);
    std::mt19937_64 rng(seed);
    const double hidden = net.cfg_.hidden_bound();
    const double last = net.cfg_.output_bound();
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
        const Layer& layer = net.layers_[l];
        const double bound = l + 1 == net.layers_.size() ? last : hidden;
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (std::size_t i = 0; i < layer.in * layer.out; ++i) net.params_[layer.weight_offset + i] = dist(rng);
    }
    return net;
}

std::span<const double> SirenNetwork::weights(std::size_t layer) const {
    const Layer& l = layers_.at(layer);
    return std::span<const double>(params_).subspan(l.weight_offset, l.in * l.out);
}

std::span<const double> SirenNetwork::biases(std::size_t layer) const {
    const Layer& l = layers_.at(layer);
    return std::span<const double>(params_).subspan(l.bias_offset, l.out);
}

SirenNetwork::Bound SirenNetwork::bind(ad::Tape& tape, bool requires_grad) const {
    Bound b;
    b.network = this;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        auto w = weights(l);
        auto bias = biases(l);
        b.weights.push_back(tape.leaf({layers_[l].out, layers_[l].in}, {w.begin(), w.end()}, requires_grad));
        b.biases.push_back(tape.leaf({layers_[l].out}, {bias.begin(), bias.end()}, requires_grad));
    }
    return b;
}

std::vector<double> SirenNetwork::Bound::gradient() const {
    std::vector<double> g(network->parameter_count(), 0.0);
    const auto& layers = network->layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        auto gw = weights[l].grad();
        auto gb = biases[l].grad();
        if (!gw.empty()) std::copy(gw.begin(), gw.end(), g.begin() + static_cast<std::ptrdiff_t>(layers[l].weight_offset));
        if (!gb.empty()) std::copy(gb.begin(), gb.end(), g.begin() + static_cast<std::ptrdiff_t>(layers[l].bias_offset));
    }
    return g;
}

ad::Var SirenNetwork::forward(const Bound& bound, ad::Var encoded) const {
    if (bound.network != this) throw Error("SirenNetwork::forward: parameters bound from another network");
    if (encoded.shape().size() != 2 || encoded.cols() != input_dim()) {
        throw ShapeError("siren_forward", encoded.shape(), Shape{0, input_dim()});
    }
    ad::Var z = encoded;
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        z = ad::sine(ad::linear(z, bound.weights[l], bound.biases[l]), cfg_.omega);
        if (l + 1 == cfg_.skip_index) z = ad::concat_cols(z, encoded);
    }
    return ad::linear(z, bound.weights.back(), bound.biases.back());
}

ad::Var SirenNetwork::forward(const Bound& bound, std::span<const double> coords) const {
    const std::size_t d = cfg_.encoding.input_dim;
    auto input = network_input_batch(coords, cfg_.encoding);
    const std::size_t n = coords.size() / d;
    ad::Var x = bound.weights.front().tape().constant({n, input_dim()}, std::move(input));
    return forward(bound, x);
}

std::vector<double> SirenNetwork::evaluate(std::span<const double> coords) const {
    ad::Tape tape;
    Bound b = bind(tape, false);
    ad::Var y = forward(b, coords);
    return {y.value().begin(), y.value().end()};
}

// ---------------------------------------------------------------- checkpoint

namespace {
constexpr char kCheckpointMagic[4] = {'I', 'N', 'R', 'S'};
constexpr std::uint32_t kCheckpointVersion = 1;
}  // namespace

void write_checkpoint(std::ostream& os, const SirenNetwork& net) {
    using namespace detail;
    const SirenConfig& c = net.config();
    os.write(kCheckpointMagic, 4);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(c.encoding.input_dim));
    put_u32(os, static_cast<std::uint32_t>(c.encoding.num_frequencies));
    put_f64(os, c.encoding.sigma);
    put_u32(os, static_cast<std::uint32_t>(c.hidden_width));
    put_u32(os, static_cast<std::uint32_t>(c.num_hidden));
    put_u32(os, static_cast<std::uint32_t>(c.skip_index));
    put_u32(os, static_cast<std::uint32_t>(net.output_dim()));
    put_f64(os, c.omega);
    put_f64(os, c.init_c);
    put_f64(os, c.last_layer_bound);
    put_u32(os, static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& l : net.layers()) {
        put_u32(os, static_cast<std::uint32_t>(l.in));
        put_u32(os, static_cast<std::uint32_t>(l.out));
    }
    put_u64(os, net.parameter_count());
    for (double p : net.parameters()) put_f64(os, p);
    if (!os) throw Error("write_checkpoint: stream error");
}

SirenNetwork read_checkpoint(std::istream& is) {
    using namespace detail;
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || !std::equal(magic, magic + 4, kCheckpointMagic)) throw Error("read_checkpoint: bad magic");
    if (get_u32(is) != kCheckpointVersion) throw Error("read_checkpoint: unsupported version");
    SirenConfig c;
    c.encoding.input_dim = get_u32(is);
    c.encoding.num_frequencies = get_u32(is);
    c.encoding.sigma = get_f64(is);
    c.hidden_width = get_u32(is);
    c.num_hidden = get_u32(is);
    c.skip_index = get_u32(is);
    const std::size_t output_dim = get_u32(is);
    c.omega = get_f64(is);
    c.init_c = get_f64(is);
    c.last_layer_bound = get_f64(is);
    if (!is || c.encoding.input_dim > 16 || c.encoding.num_frequencies > 1024 || c.hidden_width > (1u << 16) ||
        c.num_hidden > 64 || output_dim > 64) {
        throw Error("read_checkpoint: implausible header");
    }
    SirenNetwork net(c, output_dim);
    const std::uint32_t num_layers = get_u32(is);
    if (num_layers != net.layers().size()) throw Error("read_checkpoint: layer count does not match header");
    for (const auto& l : net.layers()) {
        const std::uint32_t in = get_u32(is);
        const std::uint32_t out = get_u32(is);
        if (in != l.in || out != l.out) throw Error("read_checkpoint: layer dims do not match header");
    }
    if (get_u64(is) != net.parameter_count()) throw Error("read_checkpoint: parameter count mismatch");
    for (double& p : net.parameters()) p = get_f64(is);
    return net;
}

void save_checkpoint(const std::string& path, const SirenNetwork& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(path, "cannot open for writing");
    write_checkpoint(os, net);
}

SirenNetwork load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(path, "cannot open for reading");
    try {
        return read_checkpoint(is);
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw IoError(path, e.what());
    }
}

}  // namespace inreg
