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

#include "inreg/engine.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "inreg/imageio.hpp"

namespace inreg {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::plain: return "plain";
        case Mode::dec: return "dec";
        case Mode::dec_excl: return "dec-excl";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text) {
    if (text == "plain") return Mode::plain;
    if (text == "dec") return Mode::dec;
    if (text == "dec-excl" || text == "dec_excl") return Mode::dec_excl;
    throw Error("unknown mode '" + std::string(text) + "' (expected plain, dec or dec-excl)");
}

void RegistrationConfig::validate() const {
    if (epochs < 1) throw Error("RegistrationConfig: epochs must be >= 1");
    if (height < 3 || width < 3) throw ShapeError("RegistrationConfig", Shape{height, width}, Shape{3, 3});
    weights.validate();
    lncc.validate(height, width);
    network.validate();
    if (network.encoding.input_dim != 2) throw Error("RegistrationConfig: networks must take 2D coordinates");
    if (!(optimizer.learning_rate > 0.0)) throw Error("RegistrationConfig: learning rate must be positive");
}

LossWeights RegistrationConfig::effective_weights() const {
    LossWeights w = weights;
    if (mode == Mode::plain) {
        w.cc_support = 0.0;
        w.rec = 0.0;
        w.excl = 0.0;
    } else if (mode == Mode::dec) {
        w.excl = 0.0;
    }
    return w;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string hexfloat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

SirenConfig decomposition_config(SirenConfig cfg) {
    cfg.last_layer_bound = 0.0;  // hidden-layer bound
    return cfg;
}

std::vector<double> channel_mean(const Image& img) {
    std::vector<double> out(img.pixels());
    for (std::size_t p = 0; p < img.pixels(); ++p) {
        double s = 0.0;
        for (std::size_t c = 0; c < img.channels; ++c) s += img.data[p * img.channels + c];
        out[p] = s / static_cast<double>(img.channels);
    }
    return out;
}

double value_or_zero(ad::Var v) { return v.valid() ? v.item() : 0.0; }

}  // namespace

std::string config_digest(const RegistrationConfig& cfg) {
    std::ostringstream os;
    const auto& n = cfg.network;
    os << "mode=" << to_string(cfg.mode) << ";epochs=" << cfg.epochs << ";height=" << cfg.height
       << ";width=" << cfg.width << ";alpha=" << hexfloat(cfg.weights.cc_moved) << ','
       << hexfloat(cfg.weights.cc_support) << ',' << hexfloat(cfg.weights.reg) << ',' << hexfloat(cfg.weights.rec)
       << ',' << hexfloat(cfg.weights.excl) << ";lncc=" << cfg.lncc.window_h << 'x' << cfg.lncc.window_w << ','
       << hexfloat(cfg.lncc.eps) << ";seed=" << cfg.seed << ";adamw=" << hexfloat(cfg.optimizer.learning_rate) << ','
       << hexfloat(cfg.optimizer.beta1) << ',' << hexfloat(cfg.optimizer.beta2) << ','
       << hexfloat(cfg.optimizer.epsilon) << ',' << hexfloat(cfg.optimizer.weight_decay) << ";siren="
       << n.hidden_width << ',' << n.num_hidden << ',' << n.skip_index << ',' << hexfloat(n.omega) << ','
       << hexfloat(n.init_c) << ',' << hexfloat(n.last_layer_bound) << ";fe=" << n.encoding.num_frequencies << ','
       << hexfloat(n.encoding.sigma) << ',' << n.encoding.input_dim << ";deterministic=" << cfg.deterministic;
    // FNV-1a, 64 bit.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::pair<Image, Image> render_decomposition(const SirenNetwork& support, const SirenNetwork& residual,
                                             const CoordinateGrid& grid) {
    Image s(grid.height, grid.width, support.output_dim(), support.evaluate(grid.coords));
    Image r(grid.height, grid.width, residual.output_dim(), residual.evaluate(grid.coords));
    return {std::move(s), std::move(r)};
}

DisplacementField render_field(const SirenNetwork& deformation, const CoordinateGrid& grid) {
    if (deformation.output_dim() != 2) throw Error("render_field: deformation network must have 2 outputs");
    return DisplacementField{grid.height, grid.width, deformation.evaluate(grid.coords)};
}

// ---------------------------------------------------------------- Registration

Registration::Registration(Image moving, Image fixed, RegistrationConfig cfg)
    : cfg_(std::move(cfg)),
      weights_(cfg_.effective_weights()),
      moving_(std::move(moving)),
      fixed_(std::move(fixed)),
      grid_(CoordinateGrid::make(cfg_.height, cfg_.width)),
      d_(SirenNetwork::init(splitmix64(cfg_.seed ^ 0x1), 2, cfg_.network)),
      s_(SirenNetwork::init(splitmix64(cfg_.seed ^ 0x2), moving_.channels, decomposition_config(cfg_.network))),
      r_(SirenNetwork::init(splitmix64(cfg_.seed ^ 0x3), moving_.channels, decomposition_config(cfg_.network))),
      opt_d_(d_.parameter_count(), cfg_.optimizer),
      opt_s_(s_.parameter_count(), cfg_.optimizer),
      opt_r_(r_.parameter_count(), cfg_.optimizer) {
    cfg_.validate();
    const Shape grid_shape{cfg_.height, cfg_.width};
    if (moving_.height != cfg_.height || moving_.width != cfg_.width) {
        throw ShapeError("Registration(moving)", moving_.shape(), grid_shape);
    }
    if (fixed_.height != cfg_.height || fixed_.width != cfg_.width) {
        throw ShapeError("Registration(fixed)", fixed_.shape(), grid_shape);
    }
    encoded_ = network_input_batch(grid_.coords, cfg_.network.encoding);
}

LossTerms Registration::build(ad::Tape& tape, Bindings& b, ad::Var& total) {
    const std::size_t h = cfg_.height;
    const std::size_t w = cfg_.width;
    const std::size_t n = grid_.size();
    const bool decompose = cfg_.mode != Mode::plain;

    ad::Var encoded = tape.constant({n, d_.input_dim()}, encoded_);
    ad::Var grid = tape.constant({n, 2}, grid_.coords);
    ad::Var moving = tape.constant({n, moving_.channels}, moving_.data);
    ad::Var fixed = tape.constant({n, 1}, channel_mean(fixed_));

    LossTerms terms;
    b.d = d_.bind(tape);
    ad::Var delta = d_.forward(b.d, encoded);
    ad::Var points = grid + delta;
    terms.cc_moved = loss_cc(fixed, ad::row_mean(bilinear_sample(moving, h, w, points)), h, w, cfg_.lncc);
    terms.reg = loss_reg(jacobian_det(delta, h, w));

    if (decompose) {
        b.s = s_.bind(tape);
        b.r = r_.bind(tape);
        ad::Var support = s_.forward(b.s, encoded);
        ad::Var residual = r_.forward(b.r, encoded);
        ad::Var warped_support = bilinear_sample(support, h, w, points);
        terms.cc_support = loss_cc(fixed, ad::row_mean(warped_support), h, w, cfg_.lncc);
        terms.rec = loss_rec(moving, support, residual);
        if (cfg_.mode == Mode::dec_excl) {
            terms.excl = loss_excl(spatial_gradient(support, h, w), spatial_gradient(residual, h, w));
        }
    }
    total = composite_loss(tape, terms, weights_);
    return terms;
}

LossTerms Registration::build_terms(ad::Tape& tape, ad::Var& total) {
    Bindings b;
    return build(tape, b, total);
}

EpochRecord Registration::step() {
    ad::Tape tape;
    tape.set_finite_checks(false);
    Bindings b;
    ad::Var total;
    const LossTerms terms = build(tape, b, total);

    EpochRecord rec;
    rec.epoch = history_.size();
    rec.total = total.item();
    rec.cc_moved = value_or_zero(terms.cc_moved);
    rec.cc_support = value_or_zero(terms.cc_support);
    rec.reg = value_or_zero(terms.reg);
    rec.rec = value_or_zero(terms.rec);
    rec.excl = value_or_zero(terms.excl);
    for (double v : {rec.total, rec.cc_moved, rec.cc_support, rec.reg, rec.rec, rec.excl}) {
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "epoch " << rec.epoch << ": non-finite loss (total=" << rec.total << ", cc_moved=" << rec.cc_moved
               << ", cc_support=" << rec.cc_support << ", reg=" << rec.reg << ", rec=" << rec.rec
               << ", excl=" << rec.excl << ")";
            throw NumericalError(os.str());
        }
    }

    tape.backward(total);
    const auto gd = b.d.gradient();
    if (cfg_.mode != Mode::plain) {
        const auto gs = b.s.gradient();
        const auto gr = b.r.gradient();
        opt_d_.step(d_.parameters(), gd);
        opt_s_.step(s_.parameters(), gs);
        opt_r_.step(r_.parameters(), gr);
    } else {
        opt_d_.step(d_.parameters(), gd);
    }
    history_.push_back(rec);
    return rec;
}

RegistrationResult Registration::result() const {
    RegistrationResult out;
    out.field = render_field(d_, grid_);
    out.moved = warp_image(moving_, out.field);
    if (cfg_.mode != Mode::plain) {
        auto [s, r] = render_decomposition(s_, r_, grid_);
        out.support = std::move(s);
        out.residual = std::move(r);
    }
    out.loss_history = history_;
    if (out.moved.channels == fixed_.channels) {
        out.metrics.ssim = ssim(out.moved, fixed_);
    } else {
        out.metrics.ssim = ssim(to_gray(out.moved), to_gray(fixed_));
    }
    out.metrics.folding_pct = folding_pct(jacobian_det(out.field));
    return out;
}

RegistrationResult run_registration(const Image& moving, const Image& fixed, const RegistrationConfig& cfg,
                                    const EpochCallback& on_epoch) {
    Registration reg(moving, fixed, cfg);
    for (std::size_t e = 0; e < cfg.epochs; ++e) {
        const EpochRecord rec = reg.step();
        if (on_epoch) on_epoch(rec);
    }
    return reg.result();
}

}  // namespace inreg
