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

#include <vector>

#include "betascope/grid.hpp"
#include "betascope/linefit.hpp"
#include "betascope/measure.hpp"

namespace betascope {

enum class BetaExactness { exact, heuristic };

/// A beta value with its witnessing line and the normalizers that produced
/// it. For the L2 variant, value^2 * mass * diameter^2 reproduces the
/// weighted residual sum.
struct BetaResult {
    double value = 0.0;
    Line witness;
    double mass = 0.0;      // mu(region) for L2; point count for sup variant
    double diameter = 0.0;  // diam(region)
    BetaExactness exactness = BetaExactness::exact;
};

/// L2 beta of mu over the closed box `region` (normalized by diam(region)).
/// Zero-mass regions give value 0.
BetaResult beta2_region(const DiscreteMeasure& mu, const Box& region);

/// L2 beta over the closed dilation lambda*Q, gathering atoms through the
/// per-level index (index must cover Q's level and convention).
BetaResult beta2(const DiscreteMeasure& mu, const AtomIndex& index, const DyadicCube& q,
                 double lambda = 3.0);

/// Sup beta of a finite point set within the closed box: radius of the
/// thinnest enclosing slab (n=2, exact via convex hull) or cylinder
/// (n>=3, multi-start direction search) divided by diam(region). Empty
/// intersections give 0.
BetaResult beta_sup(const std::vector<std::vector<double>>& points, const Box& region);

/// beta_sup of the positive-weight atom positions of mu inside the region.
BetaResult beta_sup_of_support(const DiscreteMeasure& mu, const Box& region);

/// Convex hull of planar points, counterclockwise (monotone chain).
std::vector<std::vector<double>> convex_hull_2d(std::vector<std::vector<double>> pts);

/// Minimal slab width of a planar point set (exact, edge-flush search) and
/// a direction normal to the optimal slab.
struct Width2D {
    double width = 0.0;
    std::vector<double> slab_normal;  // unit, n=2
};
Width2D min_width_2d(const std::vector<std::vector<double>>& pts);

}  // namespace betascope
