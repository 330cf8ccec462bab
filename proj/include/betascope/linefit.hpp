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

#include <span>
#include <vector>

#include "betascope/grid.hpp"
#include "betascope/measure.hpp"

namespace betascope {

/// Line in R^n through `point` with unit `direction`.
struct Line {
    std::vector<double> point;
    std::vector<double> direction;
};

double dist_point_line(std::span<const double> x, const Line& line);

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are returned in descending order with matching unit
/// eigenvectors (rows of `vectors`). Deterministic for identical input.
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
SymmetricEigen jacobi_eigen(const std::vector<std::vector<double>>& matrix);

/// Weighted total least squares result. The line passes through the
/// weighted centroid; its direction is a principal direction of the
/// weighted second-moment matrix. `residual` is the minimal value of
/// sum w * dist(x, line)^2. When the top eigenvalue is tied (within
/// 1e-12 relative), `tied_directions` holds every principal direction
/// attaining it and `direction` is the deterministic representative:
/// the lexicographically largest unit vector of the tied eigenspace
/// whose first nonzero coordinate is positive.
struct LineFitResult {
    Line line;
    double residual = 0.0;
    double mass = 0.0;
    std::vector<double> centroid;
    std::vector<std::vector<double>> tied_directions;
};

/// Fit from packed SoA data (everything in `cols`/`w` participates).
/// Throws DegenerateInputError when total weight is zero.
LineFitResult fit_line_soa(const double* const* cols, const double* w, std::size_t dims,
                           std::size_t count);

/// Fit over the atoms of `mu` inside the closed box (full scan).
/// Spec operation: best_fit_line.
LineFitResult best_fit_line(const DiscreteMeasure& mu, const Box& region);

}  // namespace betascope
