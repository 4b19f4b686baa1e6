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

// `inreg` command-line front end: register, warp, evaluate, synth.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure (I/O, shape
// mismatch, non-finite loss).

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "inreg/image.hpp"
#include "inreg/metrics.hpp"
#include "inreg/warp.hpp"

namespace inreg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// A labelled mask pair for Dice. `source` lives in moving-image space and is
/// warped through the field unless `prewarped` is set.
struct MaskPair {
    std::string name;
    Mask source;
    Mask target;
    bool prewarped = false;
};

/// Metrics exactly as `evaluate` reports them for the given artifacts.
MetricReport evaluate_artifacts(const Image& moved, const Image& fixed, const DisplacementField& field,
                                const std::vector<MaskPair>& masks);

/// metrics.json text; config_digest is written as null when absent.
std::string metrics_json(const MetricReport& report, const std::optional<std::string>& config_digest);

/// Loads a PNG mask and resamples it to h x w (bilinear, threshold 0.5).
Mask load_mask(const std::string& path, std::size_t h, std::size_t w);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inreg::cli
