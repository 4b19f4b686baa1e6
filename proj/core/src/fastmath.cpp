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

#include "fastmath.hpp"

#include <cmath>

namespace inreg::detail {

namespace {

// pi/2 split in three parts; q * kPio2a is exact for |q| < 2^20.
constexpr double kPio2a = 1.57079632673412561417e+00;
constexpr double kPio2b = 6.07710050630396597660e-11;
constexpr double kPio2c = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kMaxArg = 1.0e6;
// Adding and subtracting 1.5 * 2^52 rounds to the nearest integer.
constexpr double kRound = 6755399441055744.0;

constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;

constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

}  // namespace

void sincos_scaled(const double* __restrict x, double scale, double* __restrict s, double* __restrict c,
                   std::size_t n) {
    std::size_t overflow = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = scale * x[i];
        overflow += std::fabs(v) < kMaxArg ? 0 : 1;
        const double q = (v * kTwoOverPi + kRound) - kRound;
        const double r = ((v - q * kPio2a) - q * kPio2b) - q * kPio2c;
        const double z = r * r;
        const double sr = r + r * z * (S1 + z * (S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)))));
        const double cr = 1.0 - 0.5 * z + z * z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));
        // k = q mod 4, represented in {-2, -1, 0, 1, 2}.
        const double k = q - 4.0 * ((q * 0.25 + kRound) - kRound);
        const double ak = std::fabs(k);
        const double sa = ak == 1.0 ? cr : sr;
        const double ca = ak == 1.0 ? sr : cr;
        s[i] = (ak == 2.0 || k == -1.0) ? -sa : sa;
        c[i] = (ak == 2.0 || k == 1.0) ? -ca : ca;
    }
    if (overflow == 0) return;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = scale * x[i];
        if (std::fabs(v) < kMaxArg) continue;
        s[i] = std::sin(v);
        c[i] = std::cos(v);
    }
}

}  // namespace inreg::detail
