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

#include <map>
#include <vector>

#include "betascope/grid.hpp"

namespace betascope {

/// Polygonal curve: ordered vertices, cached total length, and SoA segment
/// endpoints for batch distance kernels.
class PolyCurve {
public:
    static PolyCurve from_vertices(std::vector<std::vector<double>> vertices);

    std::size_t dimension() const { return dim_; }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }
    double length() const { return length_; }
    std::size_t segment_count() const { return seg_count_; }

    const std::vector<const double*>& seg_a_ptrs() const { return a_ptrs_; }
    const std::vector<const double*>& seg_b_ptrs() const { return b_ptrs_; }

    /// Point at arclength s (clamped to [0, length]).
    std::vector<double> point_at(double s) const;

    bool bounds(std::vector<double>& lo, std::vector<double>& hi) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<double>> vertices_;
    double length_ = 0.0;
    std::size_t seg_count_ = 0;
    std::vector<std::vector<double>> a_cols_, b_cols_;
    std::vector<const double*> a_ptrs_, b_ptrs_;
};

/// Exact Euclidean distance from a point to the curve.
double curve_distance(std::span<const double> x, const PolyCurve& curve);

/// Exact distance between a closed axis-aligned box and the curve
/// (piecewise-quadratic minimization over each segment's clamp pattern).
double box_curve_distance(const Box& box, const PolyCurve& curve);

/// Points on the curve at arclength spacing <= `spacing`, always including
/// every vertex.
std::vector<std::vector<double>> sample_polyline(const PolyCurve& curve, double spacing);

/// Whitney class index: the k with 2^-k-1 < dist <= 2^-k.
int k_class_of(double dist);

struct WhitneyCube {
    DyadicCube cube;        // half-open
    double dist_to_curve;   // exact, positive
    int k_class;
};

/// Leaf cubes that could not be emitted: cubes meeting the curve (dist 0)
/// subdivided down to max_level, plus cubes whose whole subtree can never
/// satisfy the inequalities (dist already exceeds diam).
struct UnresolvedCube {
    DyadicCube cube;
    double dist_to_curve;
};

struct WhitneyDecomposition {
    std::vector<WhitneyCube> cubes;
    std::vector<UnresolvedCube> unresolved;
    double unresolved_volume = 0.0;
    int max_level = 0;
};

/// Disjoint half-open dyadic cubes covering domain minus the curve, each
/// satisfying dist(T,curve) <= diam T <= 4 dist(T,curve). Cubes are emitted
/// greedily top-down (largest valid cube wins). The unresolved list plus
/// the emitted cubes cover the domain minus the curve.
WhitneyDecomposition whitney_decompose(const PolyCurve& curve, const Box& domain, int max_level);

/// Groups Whitney cubes by their k class.
std::map<int, std::vector<std::size_t>> classify_Tk(const std::vector<WhitneyCube>& cubes);

}  // namespace betascope
