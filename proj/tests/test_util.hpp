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

#pragma once

#include <random>
#include <vector>

#include "betascope/grid.hpp"
#include "betascope/measure.hpp"

namespace betascope::testutil {

inline Box make_box(std::vector<double> lo, std::vector<double> hi) {
    Box b;
    b.center.resize(lo.size());
    b.half_sides.resize(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) {
        b.center[d] = 0.5 * (lo[d] + hi[d]);
        b.half_sides[d] = 0.5 * (hi[d] - lo[d]);
    }
    return b;
}

inline Box unit_box(std::size_t n) {
    return make_box(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

inline DiscreteMeasure measure_of(const std::vector<std::vector<double>>& pts,
                                  const std::vector<double>& weights = {}) {
    DiscreteMeasure mu(pts.empty() ? 1 : pts[0].size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        mu.add(pts[i], weights.empty() ? 1.0 : weights[i]);
    return mu;
}

/// Uniformly spaced unit-rate measure on the segment [a,b] (atom weights
/// sum to the segment length).
inline DiscreteMeasure segment_measure(std::vector<double> a, std::vector<double> b,
                                       std::size_t count) {
    DiscreteMeasure mu(a.size());
    double len2 = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double e = b[d] - a[d];
        len2 += e * e;
    }
    const double len = std::sqrt(len2);
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < count; ++i) {
        const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        for (std::size_t d = 0; d < a.size(); ++d) p[d] = a[d] + t * (b[d] - a[d]);
        mu.add(p, len / static_cast<double>(count));
    }
    mu.set_resolution_scale(len / static_cast<double>(count));
    return mu;
}

inline std::vector<std::vector<double>> random_points(std::size_t count, std::size_t dims,
                                                      std::uint64_t seed, double lo = 0.0,
                                                      double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dims));
    for (auto& p : pts)
        for (double& x : p) x = uni(rng);
    return pts;
}

inline DiscreteMeasure random_measure(std::size_t count, std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x5555aaaa5555aaaaull);
    std::uniform_real_distribution<double> wdist(0.1, 2.0);
    DiscreteMeasure mu(dims);
    for (const auto& p : random_points(count, dims, seed)) mu.add(p, wdist(rng));
    return mu;
}

}  // namespace betascope::testutil
