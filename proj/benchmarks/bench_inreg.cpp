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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "inreg/engine.hpp"
#include "inreg/losses.hpp"
#include "inreg/siren.hpp"
#include "inreg/synth.hpp"
#include "inreg/warp.hpp"

namespace {

using namespace inreg;

std::vector<double> uniform(std::size_t n, double lo, double hi) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

SirenConfig network(std::int64_t width) {
    SirenConfig cfg;
    cfg.hidden_width = static_cast<std::size_t>(width);
    return cfg;
}

void BM_Sine(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = uniform(n, -3.0, 3.0);
    for (auto _ : state) {
        ad::Tape t;
        ad::Var y = ad::sine(t.constant({n, 1}, x), 30.0);
        benchmark::DoNotOptimize(y.value().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sine)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_SirenForward(benchmark::State& state) {
    const auto grid = CoordinateGrid::make(64, 64);
    const auto net = SirenNetwork::init(1, 2, network(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(net.evaluate(grid.coords));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_SirenForward)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SirenForwardBackward(benchmark::State& state) {
    const auto grid = CoordinateGrid::make(64, 64);
    const auto net = SirenNetwork::init(1, 2, network(state.range(0)));
    for (auto _ : state) {
        ad::Tape t;
        const auto bound = net.bind(t);
        t.backward(ad::mean(ad::square(net.forward(bound, grid.coords))));
        benchmark::DoNotOptimize(bound.gradient());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_SirenForwardBackward)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LossCc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = uniform(n * n, 0.0, 1.0);
    const auto b = uniform(n * n, 0.0, 1.0);
    const LnccConfig cfg{32, 32, 1e-5};
    for (auto _ : state) {
        ad::Tape t;
        ad::Var x = t.leaf({n * n, 1}, b);
        t.backward(loss_cc(t.constant({n * n, 1}, a), x, n, n, cfg));
        benchmark::DoNotOptimize(x.grad().data());
    }
}
BENCHMARK(BM_LossCc)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Epoch(benchmark::State& state) {
    SyntheticConfig sc;
    sc.seed = 1;
    sc.deform_amp = 6.0;
    sc.texture.count = 6;
    const auto pair = make_synthetic_pair(sc);
    RegistrationConfig cfg;
    cfg.mode = static_cast<Mode>(state.range(0));
    cfg.height = cfg.width = 64;
    cfg.network.hidden_width = 128;
    Registration reg(pair.moving, pair.fixed, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(reg.step());
    state.SetLabel(std::string(to_string(cfg.mode)));
}
BENCHMARK(BM_Epoch)
    ->Arg(static_cast<int>(Mode::plain))
    ->Arg(static_cast<int>(Mode::dec))
    ->Arg(static_cast<int>(Mode::dec_excl))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
