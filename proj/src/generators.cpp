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

#include "betascope/generators.hpp"

#include <array>
#include <cmath>
#include <random>

#include "betascope/error.hpp"

namespace betascope {

std::vector<double> cascade_cells(const CascadeParams& params) {
    if (!(params.delta > 0.0 && params.delta <= 1.0 / 3.0))
        throw InputError("cascade_cells: delta must lie in (0, 1/3]");
    if (params.gen_depth < 1) throw InputError("cascade_cells: gen_depth must be >= 1");
    const double outer = params.delta;            // (1 + (1-3d)*h)/3 with h = -1
    const double middle = 1.0 - 2.0 * params.delta;  // h = 2
    std::vector<double> w{1.0};
    for (int k = 0; k < params.gen_depth; ++k) {
        std::vector<double> next;
        next.reserve(w.size() * 3);
        for (double m : w) {
            next.push_back(m * outer);
            next.push_back(m * middle);
            next.push_back(m * outer);
        }
        w = std::move(next);
    }
    return w;
}

DiscreteMeasure cascade_product(const CascadeParams& params) {
    if (params.dimension < 1) throw InputError("cascade_product: dimension must be >= 1");
    const double cells1d = std::pow(3.0, params.gen_depth);
    if (std::pow(cells1d, params.dimension) > 1e7)
        throw CostGuardError("cascade_product: 3^(K*n) exceeds 1e7 atoms");
    const std::vector<double> eta = cascade_cells(params);
    const std::size_t m = eta.size();
    const double h = 1.0 / static_cast<double>(m);
    const std::size_t n = static_cast<std::size_t>(params.dimension);

    DiscreteMeasure mu(n);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> pos(n);
    while (true) {
        double w = 1.0;
        for (std::size_t d = 0; d < n; ++d) {
            w *= eta[idx[d]];
            pos[d] = (static_cast<double>(idx[d]) + 0.5) * h;
        }
        mu.add(pos, w);
        std::size_t d = 0;
        for (; d < n; ++d) {
            if (++idx[d] < m) break;
            idx[d] = 0;
        }
        if (d == n) break;
    }
    mu.set_resolution_scale(h);
    return mu;
}

DiscreteMeasure four_corner_cantor(int level) {
    if (level < 1 || level > 12) throw InputError("four_corner_cantor: level must be in [1,12]");
    std::vector<std::array<double, 2>> corners{{0.0, 0.0}};
    double side = 1.0;
    for (int l = 0; l < level; ++l) {
        side /= 4.0;
        std::vector<std::array<double, 2>> next;
        next.reserve(corners.size() * 4);
        for (const auto& c : corners) {
            next.push_back({c[0], c[1]});
            next.push_back({c[0] + 3.0 * side, c[1]});
            next.push_back({c[0], c[1] + 3.0 * side});
            next.push_back({c[0] + 3.0 * side, c[1] + 3.0 * side});
        }
        corners = std::move(next);
    }
    DiscreteMeasure mu(2);
    const double w = 1.0 / static_cast<double>(corners.size());
    for (const auto& c : corners) {
        const double p[2] = {c[0] + side / 2.0, c[1] + side / 2.0};
        mu.add(std::span<const double>(p, 2), w);
    }
    mu.set_resolution_scale(side);
    return mu;
}

DiscreteMeasure curve_measure(const PolyCurve& curve, double atoms_per_unit_length,
                              const WeightProfile& profile) {
    if (!(atoms_per_unit_length > 0.0))
        throw InputError("curve_measure: atoms_per_unit_length must be positive");
    const double len = curve.length();
    const std::size_t count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len * atoms_per_unit_length)));
    DiscreteMeasure mu(curve.dimension());
    const double spacing = len / static_cast<double>(count);
    std::vector<double> weights(count);
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double s = (static_cast<double>(i) + 0.5) * spacing;
        weights[i] = profile.kind == WeightProfile::Kind::exponential
                         ? std::exp(-profile.rate * s)
                         : 1.0;
        total += weights[i];
    }
    const double target = len > 0.0 ? len : 1.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double s = (static_cast<double>(i) + 0.5) * spacing;
        mu.add(curve.point_at(s), weights[i] * target / total);
    }
    mu.set_resolution_scale(spacing);
    return mu;
}

DiscreteMeasure lebesgue_box(int dimension, int level) {
    if (dimension < 1) throw InputError("lebesgue_box: dimension must be >= 1");
    if (level < 0) throw InputError("lebesgue_box: level must be >= 0");
    const double cells1d = std::ldexp(1.0, level);
    if (std::pow(cells1d, dimension) > 1e7)
        throw CostGuardError("lebesgue_box: 2^(level*n) exceeds 1e7 atoms");
    const std::size_t m = static_cast<std::size_t>(cells1d);
    const double h = 1.0 / cells1d;
    const std::size_t n = static_cast<std::size_t>(dimension);
    DiscreteMeasure mu(n);
    const double w = std::pow(h, dimension);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> pos(n);
    while (true) {
        for (std::size_t d = 0; d < n; ++d) pos[d] = (static_cast<double>(idx[d]) + 0.5) * h;
        mu.add(pos, w);
        std::size_t d = 0;
        for (; d < n; ++d) {
            if (++idx[d] < m) break;
            idx[d] = 0;
        }
        if (d == n) break;
    }
    mu.set_resolution_scale(h);
    return mu;
}

PolyCurve staircase_curve(int steps) {
    if (steps < 1) throw InputError("staircase_curve: steps must be >= 1");
    std::vector<std::vector<double>> v;
    const double dx = 1.0 / (steps + 1);
    double x = 0.0, y = 0.0;
    v.push_back({x, y});
    for (int s = 0; s < steps; ++s) {
        x += dx;
        v.push_back({x, y});
        y += dx;
        v.push_back({x, y});
    }
    v.push_back({1.0, y});
    return PolyCurve::from_vertices(std::move(v));
}

PolyCurve random_staircase(double target_length, std::uint64_t seed) {
    if (!(target_length > 0.0)) throw InputError("random_staircase: length must be positive");
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
    std::uniform_real_distribution<double> seg_len(0.08, 0.27);
    std::uniform_real_distribution<double> start(0.31, 0.67);
    const double lo = 0.03, hi = 0.97;
    double x = start(rng), y = start(rng);
    std::vector<std::vector<double>> v{{x, y}};
    double remaining = target_length;
    bool horizontal = true;
    while (remaining > 1e-9) {
        const double want = std::min(remaining, seg_len(rng));
        double& c = horizontal ? x : y;
        double dir = (rng() & 1u) ? 1.0 : -1.0;
        if (c + dir * want > hi || c + dir * want < lo) dir = -dir;
        double step = want;
        if (c + dir * step > hi) step = hi - c;
        if (c + dir * step < lo) step = c - lo;
        if (step > 1e-9) {
            c += dir * step;
            v.push_back({x, y});
            remaining -= step;
        }
        horizontal = !horizontal;
    }
    return PolyCurve::from_vertices(std::move(v));
}

PolyCurve serpentine_curve(int rows) {
    if (rows < 1) throw InputError("serpentine_curve: rows must be >= 1");
    std::vector<std::vector<double>> v;
    const double dy = 1.0 / rows;
    for (int r = 0; r < rows; ++r) {
        const double y = (r + 0.5) * dy;
        if (r % 2 == 0) {
            v.push_back({0.02, y});
            v.push_back({0.98, y});
        } else {
            v.push_back({0.98, y});
            v.push_back({0.02, y});
        }
    }
    return PolyCurve::from_vertices(std::move(v));
}

PolyCurve l_shape_curve() {
    return PolyCurve::from_vertices({{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.9}});
}

PolyCurve diagonal_curve() {
    return PolyCurve::from_vertices({{0.05, 0.08}, {0.95, 0.91}});
}

}  // namespace betascope
