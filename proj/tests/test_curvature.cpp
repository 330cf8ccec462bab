// Copyright 2026-present the betascope project
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

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "betascope/curvature.hpp"
#include "betascope/error.hpp"
#include "test_util.hpp"

using namespace betascope;
using namespace betascope::testutil;

namespace {

// Independent oracle: circumradius via the perpendicular-bisector circle
// fit in 2D (solves for the center, returns 1/radius).
double circle_fit_curvature(const std::array<double, 2>& a, const std::array<double, 2>& b,
                            const std::array<double, 2>& c) {
    const double d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if (std::abs(d) < 1e-15) return 0.0;
    const double a2 = a[0] * a[0] + a[1] * a[1];
    const double b2 = b[0] * b[0] + b[1] * b[1];
    const double c2 = c[0] * c[0] + c[1] * c[1];
    const double ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    const double uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    return 1.0 / std::hypot(a[0] - ux, a[1] - uy);
}

}  // namespace

TEST_CASE("menger: collinear, right isoceles, equilateral") {
    const std::vector<double> p0{0.0, 0.0}, p1{1.0, 0.0}, p2{2.0, 0.0};
    CHECK(menger(p0, p1, p2) == 0.0);

    const std::vector<double> q2{0.0, 1.0};
    CHECK(menger(p0, p1, q2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(menger(p0, p1, q2) ==
          doctest::Approx(circle_fit_curvature({0, 0}, {1, 0}, {0, 1})).epsilon(1e-12));

    const std::vector<double> e2{0.5, std::sqrt(3.0) / 2.0};
    CHECK(menger(p0, p1, e2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    CHECK(menger(p0, p1, e2) ==
          doctest::Approx(circle_fit_curvature({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}))
              .epsilon(1e-12));

    CHECK(menger(p0, p0, p1) == 0.0);  // coincident points
    CHECK_THROWS_AS(menger(p0, p1, std::vector<double>{0.0}), InputError);
}

TEST_CASE("menger is symmetric under all six permutations, bit for bit") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> a{uni(rng), uni(rng), uni(rng)};
        const std::vector<double> b{uni(rng), uni(rng), uni(rng)};
        const std::vector<double> c{uni(rng), uni(rng), uni(rng)};
        const double v = menger(a, b, c);
        CHECK(v == menger(a, c, b));
        CHECK(v == menger(b, a, c));
        CHECK(v == menger(b, c, a));
        CHECK(v == menger(c, a, b));
        CHECK(v == menger(c, b, a));
    }
}

TEST_CASE("menger: rigid invariance and 1/s scaling") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<double> a{uni(rng), uni(rng)}, b{uni(rng), uni(rng)},
            c{uni(rng), uni(rng)};
        const double v = menger(a, b, c);
        const double theta = uni(rng) * 3.0;
        const double ct = std::cos(theta), st = std::sin(theta);
        const double tx = uni(rng) * 5.0, ty = uni(rng) * 5.0;
        auto rot = [&](const std::vector<double>& p) {
            return std::vector<double>{ct * p[0] - st * p[1] + tx, st * p[0] + ct * p[1] + ty};
        };
        CHECK(menger(rot(a), rot(b), rot(c)) == doctest::Approx(v).epsilon(1e-12));

        const double s = 0.1 + 3.0 * std::abs(uni(rng));
        auto scale = [&](const std::vector<double>& p) {
            return std::vector<double>{s * p[0], s * p[1]};
        };
        if (v > 0.0)
            CHECK(menger(scale(a), scale(b), scale(c)) == doctest::Approx(v / s).epsilon(1e-12));
    }
}

TEST_CASE("leger_energy: collinear zero, 3-atom exact value, guard") {
    DiscreteMeasure line(2);
    for (int i = 0; i < 100; ++i)
        line.add(std::vector<double>{0.01 * i, 0.02 * i}, 1.0);
    const CurvatureEnergy zero = leger_energy(line, EnergyMode::exact);
    CHECK(zero.value == 0.0);
    CHECK(zero.std_error == 0.0);

    // Right isoceles triple, unit weights: 6 nondegenerate ordered triples,
    // each with c^2 = 2 -> total 12.
    DiscreteMeasure tri = measure_of({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    const CurvatureEnergy e = leger_energy(tri, EnergyMode::exact);
    CHECK(e.value == doctest::Approx(12.0).epsilon(1e-12));

    DiscreteMeasure big(2);
    for (int i = 0; i < 2001; ++i)
        big.add(std::vector<double>{i * 1e-4, 0.0}, 1.0);
    CHECK_THROWS_AS(leger_energy(big, EnergyMode::exact), CostGuardError);
    CHECK_THROWS_AS(leger_energy(tri, EnergyMode::monte_carlo, 0), InputError);
}

TEST_CASE("leger_energy vanishes only on collinear configurations") {
    DiscreteMeasure bent = measure_of({{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.2}});
    CHECK(leger_energy(bent, EnergyMode::exact).value > 0.0);
    // Weight-zero outliers do not contribute.
    DiscreteMeasure wz(2);
    wz.add(std::vector<double>{0.0, 0.0}, 1.0);
    wz.add(std::vector<double>{1.0, 0.0}, 1.0);
    wz.add(std::vector<double>{2.0, 0.0}, 1.0);
    wz.add(std::vector<double>{0.5, 0.9}, 0.0);
    CHECK(leger_energy(wz, EnergyMode::exact).value == 0.0);
}

TEST_CASE("monte carlo estimate brackets the exact energy") {
    // 100-atom curve sample with a bend.
    DiscreteMeasure mu(2);
    for (int i = 0; i < 50; ++i) mu.add(std::vector<double>{0.01 * i, 0.0}, 0.01);
    for (int i = 0; i < 50; ++i) mu.add(std::vector<double>{0.5, 0.01 * (i + 1)}, 0.01);
    const CurvatureEnergy exact = leger_energy(mu, EnergyMode::exact);
    REQUIRE(exact.value > 0.0);
    int within = 0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        const CurvatureEnergy mc = leger_energy(mu, EnergyMode::monte_carlo, 100000, seed);
        CHECK(mc.std_error > 0.0);
        if (std::abs(mc.value - exact.value) <= 3.0 * mc.std_error) ++within;
    }
    CHECK(within >= seeds * 95 / 100);
}
