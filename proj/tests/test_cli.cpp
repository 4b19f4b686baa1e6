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


#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "inreg/imageio.hpp"
#include "inreg/siren.hpp"

namespace inreg {
namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "inreg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("inreg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        const auto r = run_cli({"synth", "--seed", "3", "--size", "24", "--deform-amp", "1.5", "--texture", "2",
                                "--structures", "2", "--out", (dir_ / "data").string()});
        ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::vector<std::string> register_args(const std::string& out, const std::string& mode) const {
        const auto d = dir_ / "data";
        return {"register", "--moving", (d / "moving.png").string(), "--fixed", (d / "fixed.png").string(),
                "--out", (dir_ / out).string(), "--mode", mode, "--epochs", "3", "--size", "24",
                "--hidden-width", "16", "--lncc-window", "8", "--seed", "7", "--log-every", "0",
                "--moving-mask", (d / "masks/moving/structure_0.png").string(),
                "--fixed-mask", (d / "masks/fixed/structure_0.png").string()};
    }

    fs::path dir_;
};

TEST_F(CliTest, SynthWritesAllArtifacts) {
    const auto d = dir_ / "data";
    for (const char* f : {"moving.png", "fixed.png", "true_field.inrf", "texture_mask.png",
                          "masks/moving/structure_0.png", "masks/fixed/structure_1.png"}) {
        EXPECT_TRUE(fs::exists(d / f)) << f;
    }
    EXPECT_EQ(load_png((d / "moving.png").string()).shape(), (Shape{24, 24, 1}));
}

TEST_F(CliTest, RegisterOutputsPerMode) {
    for (const std::string mode : {"plain", "dec", "dec-excl"}) {
        const auto r = run_cli(register_args("out_" + mode, mode));
        ASSERT_EQ(r.code, cli::kExitOk) << r.err;
        const auto o = dir_ / ("out_" + mode);
        EXPECT_TRUE(fs::exists(o / "moved.png"));
        EXPECT_TRUE(fs::exists(o / "field.inrf"));
        EXPECT_EQ(fs::exists(o / "support.png"), mode != "plain");
        EXPECT_EQ(fs::exists(o / "residual.png"), mode != "plain");

        const auto j = nlohmann::json::parse(slurp(o / "metrics.json"));
        EXPECT_TRUE(j.contains("dice"));
        EXPECT_TRUE(j["dice"].contains("structure_0"));
        EXPECT_TRUE(j["ssim"].is_number());
        EXPECT_TRUE(j["folding_pct"].is_number());
        EXPECT_TRUE(j["config_digest"].is_string());
        EXPECT_EQ(nlohmann::json::parse(r.out), j);

        std::istringstream csv(slurp(o / "loss_history.csv"));
        std::string line;
        std::getline(csv, line);
        EXPECT_EQ(line, "epoch,total,cc_moved,cc_support,reg,rec,excl");
        int rows = 0;
        while (std::getline(csv, line)) ++rows;
        EXPECT_EQ(rows, 3);
    }
}

TEST_F(CliTest, DeterministicRunsAreBitIdentical) {
    ASSERT_EQ(run_cli(register_args("a", "dec-excl")).code, cli::kExitOk);
    ASSERT_EQ(run_cli(register_args("b", "dec-excl")).code, cli::kExitOk);
    for (const char* f : {"metrics.json", "field.inrf", "loss_history.csv", "moved.png", "residual.png"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
}

TEST_F(CliTest, EvaluateReproducesRegisterMetrics) {
    ASSERT_EQ(run_cli(register_args("out", "dec")).code, cli::kExitOk);
    const auto d = dir_ / "data";
    const auto o = dir_ / "out";
    const auto r = run_cli({"evaluate", "--moved", (o / "moved.png").string(), "--fixed", (d / "fixed.png").string(),
                            "--field", (o / "field.inrf").string(), "--moving-mask",
                            (d / "masks/moving/structure_0.png").string(), "--fixed-mask",
                            (d / "masks/fixed/structure_0.png").string(), "--out", (dir_ / "eval.json").string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    auto reg = nlohmann::json::parse(slurp(o / "metrics.json"));
    auto eval = nlohmann::json::parse(slurp(dir_ / "eval.json"));
    EXPECT_TRUE(eval["config_digest"].is_null());
    EXPECT_EQ(eval["dice"], reg["dice"]);
    EXPECT_EQ(eval["ssim"], reg["ssim"]);
    EXPECT_EQ(eval["folding_pct"], reg["folding_pct"]);
}

TEST_F(CliTest, WarpWithTrueFieldAndCheckpoints) {
    const auto d = dir_ / "data";
    auto r = run_cli({"warp", "--field", (d / "true_field.inrf").string(), "--image", (d / "moving.png").string(),
                      "--out", (dir_ / "w.png").string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(load_png((dir_ / "w.png").string()).shape(), (Shape{24, 24, 1}));
    r = run_cli({"warp", "--field", (d / "true_field.inrf").string(), "--image",
                 (d / "masks/moving/structure_0.png").string(), "--out", (dir_ / "m.png").string(), "--mask"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    for (double v : load_png((dir_ / "m.png").string()).data) EXPECT_TRUE(v == 0.0 || v == 1.0);

    auto args = register_args("ckpt", "dec");
    args.push_back("--save-networks");
    ASSERT_EQ(run_cli(args).code, cli::kExitOk);
    for (const char* f : {"deformation.inrs", "support.inrs", "residual.inrs"}) {
        const auto net = load_checkpoint((dir_ / "ckpt" / f).string());
        EXPECT_EQ(net.config().hidden_width, 16u);
    }
}

TEST_F(CliTest, UsageErrorsExitWithOne) {
    EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"register", "--moving", "x.png"}).code, cli::kExitUsage);
    auto args = register_args("u", "sideways");
    EXPECT_EQ(run_cli(args).code, cli::kExitUsage);
    args = register_args("u", "dec");
    args.push_back("--fixed-mask");
    args.push_back((dir_ / "data/masks/fixed/structure_1.png").string());
    EXPECT_EQ(run_cli(args).code, cli::kExitUsage);
}

TEST_F(CliTest, RuntimeFailuresExitWithTwo) {
    const auto d = dir_ / "data";
    {
        std::ofstream bad(dir_ / "bad.png");
        bad << "garbage";
    }
    auto args = register_args("f", "plain");
    args[2] = (dir_ / "bad.png").string();
    auto r = run_cli(args);
    EXPECT_EQ(r.code, cli::kExitFailure);
    EXPECT_NE(r.err.find("bad.png"), std::string::npos);

    // A 24x24 field cannot warp a 32x32 image.
    ASSERT_EQ(run_cli({"synth", "--size", "32", "--out", (dir_ / "big").string()}).code, cli::kExitOk);
    r = run_cli({"warp", "--field", (d / "true_field.inrf").string(), "--image", (dir_ / "big/moving.png").string(),
                 "--out", (dir_ / "x.png").string()});
    EXPECT_EQ(r.code, cli::kExitFailure);
}

TEST(MetricsJson, KeyOrderAndNullDigest) {
    MetricReport rep;
    rep.dice["a"] = 0.5;
    rep.ssim = 0.25;
    rep.folding_pct = 0.0;
    const auto text = cli::metrics_json(rep, std::nullopt);
    EXPECT_LT(text.find("\"dice\""), text.find("\"ssim\""));
    EXPECT_LT(text.find("\"ssim\""), text.find("\"folding_pct\""));
    EXPECT_LT(text.find("\"folding_pct\""), text.find("\"config_digest\""));
    EXPECT_TRUE(nlohmann::json::parse(text)["config_digest"].is_null());
    EXPECT_EQ(nlohmann::json::parse(cli::metrics_json(rep, "abc"))["config_digest"], "abc");
}

}  // namespace
}  // namespace inreg
