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

// Pairwise registration with a deformation network D and, in the
// decomposition modes, support/residual networks S and R.
//
// One epoch is one full-grid pass: render delta = D(grid), warp M (and the
// rendered support M_S) through Phi = grid + delta, evaluate the weighted
// objective, backpropagate and step one AdamW instance per active network.
// S and R are rendered on the undeformed grid; M_S is warped with the same
// Phi as M.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inreg/autodiff.hpp"
#include "inreg/image.hpp"
#include "inreg/losses.hpp"
#include "inreg/metrics.hpp"
#include "inreg/optim.hpp"
#include "inreg/siren.hpp"
#include "inreg/warp.hpp"

namespace inreg {

enum class Mode { plain, dec, dec_excl };

std::string_view to_string(Mode mode);
/// Accepts "plain", "dec", "dec-excl" and "dec_excl".
Mode parse_mode(std::string_view text);

struct RegistrationConfig {
    Mode mode = Mode::dec_excl;
    std::size_t epochs = 1000;
    std::size_t height = 256;
    std::size_t width = 256;
    LossWeights weights;
    LnccConfig lncc;
    std::uint64_t seed = 0;
    AdamW::Params optimizer;
    /// Architecture shared by D, S and R. The deformation network uses
    /// network.last_layer_bound; S and R use the hidden-layer bound.
    SirenConfig network;
    bool deterministic = true;

    void validate() const;
    /// Weights with the terms the mode excludes forced to zero.
    LossWeights effective_weights() const;
};

/// Stable hex digest of every field of the configuration.
std::string config_digest(const RegistrationConfig& cfg);

struct EpochRecord {
    std::size_t epoch = 0;
    double total = 0.0;
    double cc_moved = 0.0;
    double cc_support = 0.0;
    double reg = 0.0;
    double rec = 0.0;
    double excl = 0.0;
};

struct RegistrationResult {
    Image moved;
    std::optional<Image> support;
    std::optional<Image> residual;
    DisplacementField field;
    std::vector<EpochRecord> loss_history;
    MetricReport metrics;
};

/// Renders S and R on the grid; values are left unclamped.
std::pair<Image, Image> render_decomposition(const SirenNetwork& support, const SirenNetwork& residual,
                                             const CoordinateGrid& grid);

/// Renders D on the grid.
DisplacementField render_field(const SirenNetwork& deformation, const CoordinateGrid& grid);

class Registration {
public:
    /// Images must already have the configured grid size.
    Registration(Image moving, Image fixed, RegistrationConfig cfg);

    /// Runs one epoch and returns the term values before the update. Throws
    /// NumericalError (with epoch index and term breakdown) on a non-finite
    /// loss; the history up to the failing epoch is kept.
    EpochRecord step();

    /// Builds the objective for the current parameters on `tape` without
    /// stepping. Exposed for inspection and tests.
    LossTerms build_terms(ad::Tape& tape, ad::Var& total);

    std::size_t epoch() const noexcept { return history_.size(); }
    const std::vector<EpochRecord>& history() const noexcept { return history_; }
    const RegistrationConfig& config() const noexcept { return cfg_; }
    const CoordinateGrid& grid() const noexcept { return grid_; }

    const SirenNetwork& deformation() const noexcept { return d_; }
    const SirenNetwork& support() const noexcept { return s_; }
    const SirenNetwork& residual() const noexcept { return r_; }
    SirenNetwork& deformation() noexcept { return d_; }
    SirenNetwork& support() noexcept { return s_; }
    SirenNetwork& residual() noexcept { return r_; }

    /// Final rendering with the current parameters plus metrics (SSIM of the
    /// moved image against F, folding percentage of the field).
    RegistrationResult result() const;

private:
    struct Bindings {
        SirenNetwork::Bound d, s, r;
    };

    LossTerms build(ad::Tape& tape, Bindings& b, ad::Var& total);

    RegistrationConfig cfg_;
    LossWeights weights_;
    Image moving_;
    Image fixed_;
    CoordinateGrid grid_;
    std::vector<double> encoded_;
    SirenNetwork d_;
    SirenNetwork s_;
    SirenNetwork r_;
    AdamW opt_d_;
    AdamW opt_s_;
    AdamW opt_r_;
    std::vector<EpochRecord> history_;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Full job: cfg.epochs steps, then result().
RegistrationResult run_registration(const Image& moving, const Image& fixed, const RegistrationConfig& cfg,
                                    const EpochCallback& on_epoch = {});

}  // namespace inreg
