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

#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "inreg/engine.hpp"
#include "inreg/imageio.hpp"
#include "inreg/synth.hpp"

namespace inreg::cli {

namespace fs = std::filesystem;

namespace {

struct RegisterArgs {
    std::string moving;
    std::string fixed;
    std::string out;
    std::string mode = "dec-excl";
    std::size_t epochs = 1000;
    std::size_t size = 256;
    double alpha[5] = {1.0, 1.0, 1.0, 100.0, 1.0};
    std::size_t window = 32;
    std::uint64_t seed = 0;
    bool deterministic = true;
    std::size_t hidden_width = 256;
    std::vector<std::string> moving_masks;
    std::vector<std::string> fixed_masks;
    bool save_networks = false;
    std::size_t log_every = 100;
};

struct WarpArgs {
    std::string field;
    std::string image;
    std::string out;
    bool mask = false;
};

struct EvaluateArgs {
    std::string moved;
    std::string fixed;
    std::string field;
    std::vector<std::string> moving_masks;
    std::vector<std::string> moved_masks;
    std::vector<std::string> fixed_masks;
    std::string out;
};

struct SynthArgs {
    std::uint64_t seed = 0;
    std::size_t size = 64;
    double deform_amp = 6.0;
    std::size_t texture = 0;
    double texture_contrast = 0.5;
    std::size_t structures = 3;
    std::string out;
};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_history(const fs::path& path, const std::vector<EpochRecord>& history) {
    std::ofstream os(path);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    os << "epoch,total,cc_moved,cc_support,reg,rec,excl\n";
    for (const auto& r : history) {
        os << r.epoch << ',' << format_double(r.total) << ',' << format_double(r.cc_moved) << ','
           << format_double(r.cc_support) << ',' << format_double(r.reg) << ',' << format_double(r.rec) << ','
           << format_double(r.excl) << '\n';
    }
    if (!os) throw IoError(path.string(), "write failed");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    os << text;
    if (!os) throw IoError(path.string(), "write failed");
}

Image load_gray(const std::string& path, std::size_t h, std::size_t w) { return resize(to_gray(load_png(path)), h, w); }

std::vector<MaskPair> pair_masks(const std::vector<std::string>& sources, const std::vector<std::string>& targets,
                                 bool prewarped, std::size_t h, std::size_t w) {
    if (sources.size() != targets.size()) {
        throw Error("got " + std::to_string(sources.size()) + " source masks but " + std::to_string(targets.size()) +
                    " fixed masks; they are paired by position");
    }
    std::vector<MaskPair> pairs;
    std::set<std::string> names;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        std::string name = fs::path(sources[k]).stem().string();
        if (!names.insert(name).second) {
            name += "_" + std::to_string(k);
            names.insert(name);
        }
        pairs.push_back({name, load_mask(sources[k], h, w), load_mask(targets[k], h, w), prewarped});
    }
    return pairs;
}

int run_register(const RegisterArgs& a, std::ostream& out, std::ostream& err) {
    RegistrationConfig cfg;
    cfg.mode = parse_mode(a.mode);
    cfg.epochs = a.epochs;
    cfg.height = a.size;
    cfg.width = a.size;
    cfg.weights = {a.alpha[0], a.alpha[1], a.alpha[2], a.alpha[3], a.alpha[4]};
    cfg.lncc.window_h = a.window;
    cfg.lncc.window_w = a.window;
    cfg.seed = a.seed;
    cfg.deterministic = a.deterministic;
    cfg.network.hidden_width = a.hidden_width;
    cfg.validate();

    const Image moving = load_gray(a.moving, a.size, a.size);
    const Image fixed = load_gray(a.fixed, a.size, a.size);
    const auto masks = pair_masks(a.moving_masks, a.fixed_masks, false, a.size, a.size);

    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(a.out, "cannot create output directory: " + ec.message());

    Registration reg(moving, fixed, cfg);
    try {
        for (std::size_t e = 0; e < cfg.epochs; ++e) {
            const EpochRecord r = reg.step();
            if (a.log_every > 0 && (e % a.log_every == 0 || e + 1 == cfg.epochs)) {
                err << "epoch " << r.epoch << " total " << r.total << " cc " << r.cc_moved << '\n';
            }
        }
    } catch (const NumericalError&) {
        write_history(dir / "loss_history.csv", reg.history());
        throw;
    }
    write_history(dir / "loss_history.csv", reg.history());

    const RegistrationResult res = reg.result();
    save_png((dir / "moved.png").string(), res.moved);
    if (res.support) save_png((dir / "support.png").string(), *res.support);
    if (res.residual) save_png((dir / "residual.png").string(), *res.residual);
    save_field((dir / "field.inrf").string(), res.field);
    if (a.save_networks) {
        save_checkpoint((dir / "deformation.inrs").string(), reg.deformation());
        if (cfg.mode != Mode::plain) {
            save_checkpoint((dir / "support.inrs").string(), reg.support());
            save_checkpoint((dir / "residual.inrs").string(), reg.residual());
        }
    }

    // Score what was written so that `evaluate` on the outputs agrees.
    const MetricReport report = evaluate_artifacts(load_png((dir / "moved.png").string()), fixed,
                                                   load_field((dir / "field.inrf").string()), masks);
    const std::string json = metrics_json(report, config_digest(cfg));
    write_text(dir / "metrics.json", json);
    out << json;
    return kExitOk;
}

int run_warp(const WarpArgs& a, std::ostream& out) {
    const DisplacementField field = load_field(a.field);
    const Image image = load_png(a.image);
    if (image.height != field.height || image.width != field.width) {
        throw ShapeError("warp", image.shape(), Shape{field.height, field.width});
    }
    if (a.mask) {
        save_png(a.out, warp_mask(Mask::from_image(image), field).to_image());
    } else {
        save_png(a.out, warp_image(image, field));
    }
    out << "wrote " << a.out << '\n';
    return kExitOk;
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const DisplacementField field = load_field(a.field);
    const Image moved = to_gray(load_png(a.moved));
    if (moved.height != field.height || moved.width != field.width) {
        throw ShapeError("evaluate", moved.shape(), Shape{field.height, field.width});
    }
    const Image fixed = load_gray(a.fixed, field.height, field.width);
    const bool prewarped = !a.moved_masks.empty();
    const auto masks = pair_masks(prewarped ? a.moved_masks : a.moving_masks, a.fixed_masks, prewarped, field.height,
                                  field.width);
    const std::string json = metrics_json(evaluate_artifacts(moved, fixed, field, masks), std::nullopt);
    if (!a.out.empty()) write_text(a.out, json);
    out << json;
    return kExitOk;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
    SyntheticConfig cfg;
    cfg.seed = a.seed;
    cfg.size = a.size;
    cfg.deform_amp = a.deform_amp;
    cfg.texture.count = a.texture;
    cfg.texture.contrast = a.texture_contrast;
    cfg.structures = a.structures;
    const SyntheticPair pair = make_synthetic_pair(cfg);

    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir / "masks" / "moving", ec);
    if (!ec) fs::create_directories(dir / "masks" / "fixed", ec);
    if (ec) throw IoError(a.out, "cannot create output directory: " + ec.message());

    save_png((dir / "moving.png").string(), pair.moving);
    save_png((dir / "fixed.png").string(), pair.fixed);
    save_field((dir / "true_field.inrf").string(), pair.true_field);
    save_png((dir / "texture_mask.png").string(), pair.texture_mask.to_image());
    for (std::size_t k = 0; k < pair.fixed_structures.size(); ++k) {
        const std::string file = pair.fixed_structures[k].name + ".png";
        save_png((dir / "masks" / "moving" / file).string(), pair.moving_structures[k].mask.to_image());
        save_png((dir / "masks" / "fixed" / file).string(), pair.fixed_structures[k].mask.to_image());
    }
    out << "wrote synthetic pair to " << a.out << '\n';
    return kExitOk;
}

}  // namespace

MetricReport evaluate_artifacts(const Image& moved, const Image& fixed, const DisplacementField& field,
                                const std::vector<MaskPair>& masks) {
    MetricReport report;
    for (const auto& m : masks) {
        report.dice[m.name] = dice(m.prewarped ? m.source : warp_mask(m.source, field), m.target);
    }
    report.ssim = ssim(to_gray(moved), to_gray(fixed));
    report.folding_pct = folding_pct(jacobian_det(field));
    return report;
}

std::string metrics_json(const MetricReport& report, const std::optional<std::string>& config_digest) {
    nlohmann::ordered_json j;
    j["dice"] = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.dice) j["dice"][name] = value;
    j["ssim"] = report.ssim;
    j["folding_pct"] = report.folding_pct;
    j["config_digest"] = config_digest ? nlohmann::ordered_json(*config_digest) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

Mask load_mask(const std::string& path, std::size_t h, std::size_t w) {
    return Mask::from_image(resize(to_gray(load_png(path)), h, w));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"inreg: pairwise image registration with implicit neural representations"};
    app.require_subcommand(1);

    RegisterArgs reg;
    auto* cmd_reg = app.add_subcommand("register", "Register a moving image onto a fixed image");
    cmd_reg->add_option("--moving", reg.moving, "Moving image (PNG)")->required()->check(CLI::ExistingFile);
    cmd_reg->add_option("--fixed", reg.fixed, "Fixed image (PNG)")->required()->check(CLI::ExistingFile);
    cmd_reg->add_option("--out", reg.out, "Output directory")->required();
    cmd_reg->add_option("--mode", reg.mode, "plain, dec or dec-excl")
        ->capture_default_str()
        ->check(CLI::IsMember({"plain", "dec", "dec-excl", "dec_excl"}));
    cmd_reg->add_option("--epochs", reg.epochs, "Full-grid epochs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd_reg->add_option("--size", reg.size, "Square grid size")->capture_default_str()->check(CLI::Range(3, 8192));
    for (int k = 0; k < 5; ++k) {
        cmd_reg->add_option("--alpha" + std::to_string(k + 1), reg.alpha[k], "Loss weight " + std::to_string(k + 1))
            ->capture_default_str()
            ->check(CLI::NonNegativeNumber);
    }
    cmd_reg->add_option("--lncc-window", reg.window, "Square LNCC window")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmd_reg->add_option("--seed", reg.seed, "Network initialization seed")->capture_default_str();
    cmd_reg->add_flag("--deterministic,!--no-deterministic", reg.deterministic, "Bit-reproducible run (default on)");
    cmd_reg->add_option("--hidden-width", reg.hidden_width, "Hidden width of D, S and R")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_reg->add_option("--moving-mask", reg.moving_masks, "Moving-space structure mask (repeatable)")
        ->check(CLI::ExistingFile);
    cmd_reg->add_option("--fixed-mask", reg.fixed_masks, "Fixed-space structure mask, paired by position")
        ->check(CLI::ExistingFile);
    cmd_reg->add_flag("--save-networks", reg.save_networks, "Also write network checkpoints");
    cmd_reg->add_option("--log-every", reg.log_every, "Progress interval on stderr (0 = silent)")
        ->capture_default_str();

    WarpArgs warp;
    auto* cmd_warp = app.add_subcommand("warp", "Resample an image or mask through a field file");
    cmd_warp->add_option("--field", warp.field, "Field file")->required()->check(CLI::ExistingFile);
    cmd_warp->add_option("--image", warp.image, "Image or mask (PNG)")->required()->check(CLI::ExistingFile);
    cmd_warp->add_option("--out", warp.out, "Output PNG")->required();
    cmd_warp->add_flag("--mask", warp.mask, "Treat the input as a binary mask");

    EvaluateArgs eval;
    auto* cmd_eval = app.add_subcommand("evaluate", "Dice, SSIM and folding for a registration result");
    cmd_eval->add_option("--moved", eval.moved, "Moved image (PNG)")->required()->check(CLI::ExistingFile);
    cmd_eval->add_option("--fixed", eval.fixed, "Fixed image (PNG)")->required()->check(CLI::ExistingFile);
    cmd_eval->add_option("--field", eval.field, "Field file")->required()->check(CLI::ExistingFile);
    auto* opt_moving = cmd_eval->add_option("--moving-mask", eval.moving_masks, "Moving-space mask, warped by the field")
                           ->check(CLI::ExistingFile);
    auto* opt_moved = cmd_eval->add_option("--moved-mask", eval.moved_masks, "Mask already in moved space")
                          ->check(CLI::ExistingFile);
    opt_moving->excludes(opt_moved);
    cmd_eval->add_option("--fixed-mask", eval.fixed_masks, "Fixed-space mask, paired by position")
        ->check(CLI::ExistingFile);
    cmd_eval->add_option("--out", eval.out, "Also write the report to this file");

    SynthArgs syn;
    auto* cmd_syn = app.add_subcommand("synth", "Generate a synthetic pair with a known field");
    cmd_syn->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();
    cmd_syn->add_option("--size", syn.size, "Square image size")->capture_default_str()->check(CLI::Range(16, 8192));
    cmd_syn->add_option("--deform-amp", syn.deform_amp, "Largest displacement in pixels")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd_syn->add_option("--texture", syn.texture, "Number of texture blobs added to the moving image")
        ->capture_default_str();
    cmd_syn->add_option("--texture-contrast", syn.texture_contrast, "Peak texture intensity")->capture_default_str();
    cmd_syn->add_option("--structures", syn.structures, "Number of labelled structures")->capture_default_str();
    cmd_syn->add_option("--out", syn.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
        if (*cmd_reg && reg.moving_masks.size() != reg.fixed_masks.size()) {
            throw CLI::ValidationError("--fixed-mask", "needs one entry per --moving-mask");
        }
        if (*cmd_eval && eval.moving_masks.size() + eval.moved_masks.size() != eval.fixed_masks.size()) {
            throw CLI::ValidationError("--fixed-mask", "needs one entry per --moving-mask or --moved-mask");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_reg) return run_register(reg, out, err);
        if (*cmd_warp) return run_warp(warp, out);
        if (*cmd_eval) return run_evaluate(eval, out);
        if (*cmd_syn) return run_synth(syn, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace inreg::cli
