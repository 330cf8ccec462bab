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
#include "betascope/measure.hpp"

// Brute-force line-space minimizers used to cross-check the closed-form
// beta computations. These deliberately share no code with the moment /
// eigenvector path: lines are enumerated on direction x offset grids and
// refined locally, and every evaluation is a direct distance sum. Values
// are minima over finitely many true lines, hence always >= the infimum.

namespace betascope {

/// Oracle counterpart of beta2 over a closed box. At most 200 atoms may
/// lie in the region (CostGuardError otherwise).
double beta2_oracle(const DiscreteMeasure& mu, const Box& region);

/// Oracle counterpart of beta_sup. At most 200 points in the region.
/// `direction_samples` controls the coarse grid (n=2: angles, n>=3:
/// sphere points).
double beta_sup_oracle(const std::vector<std::vector<double>>& points, const Box& region,
                       int direction_samples = 8192);

}  // namespace betascope
