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

#include <cstdint>
#include <vector>

#include "betascope/measure.hpp"
#include "betascope/whitney.hpp"

namespace betascope {

/// Triadic Riesz-product cascade parameters: each parent cell splits its
/// mass (delta, 1-2*delta, delta) among its thirds. delta = 1/3 is the
/// uniform (Lebesgue) case.
struct CascadeParams {
    double delta = 0.05;
    int gen_depth = 6;  // triadic levels K
    int dimension = 2;
};

/// Cell masses of the one-dimensional cascade at depth K: 3^K weights on
/// the triadic cells of [0,1), in cell order, summing to 1.
std::vector<double> cascade_cells(const CascadeParams& params);

/// n-fold product measure: one atom per triadic cell center of [0,1)^n,
/// weight = product of per-axis cell weights. Refuses 3^(K*n) > 1e7.
DiscreteMeasure cascade_product(const CascadeParams& params);

/// Four-corner Cantor iteration (contraction 1/4): 4^level equal atoms at
/// cell centers in [0,1]^2, total mass 1. level <= 12.
DiscreteMeasure four_corner_cantor(int level);

struct WeightProfile {
    enum class Kind { arclength, exponential } kind = Kind::arclength;
    double rate = 0.0;  // exponential only
};

/// Equally spaced atoms along the curve's arclength. The arclength profile
/// gives every atom weight length/N (unit-rate measure); the exponential
/// profile weights w_i proportional to exp(-rate * s_i), rescaled to the
/// same total.
DiscreteMeasure curve_measure(const PolyCurve& curve, double atoms_per_unit_length,
                              const WeightProfile& profile = {});

/// 2^(level*n) equal atoms at dyadic cell centers of [0,1)^n, total mass 1.
DiscreteMeasure lebesgue_box(int dimension, int level);

// Fixture curves used by experiments and tests. All are polygonal and
// deterministic for a given seed.

/// Monotone staircase from (0,0) toward (1,1) with `steps` risers.
PolyCurve staircase_curve(int steps);

/// Axis-aligned random walk inside [margin, 1-margin]^2 with total length
/// close to `target_length` (corners at irrational-ish offsets).
PolyCurve random_staircase(double target_length, std::uint64_t seed);

/// Boustrophedon sweep with `rows` rows across the unit square.
PolyCurve serpentine_curve(int rows);

PolyCurve l_shape_curve();
PolyCurve diagonal_curve();

}  // namespace betascope
