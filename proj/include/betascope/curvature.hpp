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
#include <span>

#include "betascope/measure.hpp"

namespace betascope {

/// Menger curvature of a triple: reciprocal circumradius, zero for
/// coincident or (numerically) collinear points. Symmetric in its
/// arguments, bit for bit.
double menger(std::span<const double> x, std::span<const double> y, std::span<const double> z);

enum class EnergyMode { exact, monte_carlo };

struct CurvatureEnergy {
    double value = 0.0;
    EnergyMode mode = EnergyMode::exact;
    std::int64_t sample_count = 0;
    double std_error = 0.0;  // zero in exact mode
};

inline constexpr std::size_t kLegerExactAtomGuard = 2000;

/// Triple-integral Menger energy of an atomic measure:
/// sum over ordered atom triples of w_i w_j w_k c^2(x_i, x_j, x_k).
/// exact mode refuses measures above kLegerExactAtomGuard atoms;
/// monte_carlo draws `samples` mass-weighted index triples.
CurvatureEnergy leger_energy(const DiscreteMeasure& mu, EnergyMode mode,
                             std::int64_t samples = 0, std::uint64_t seed = 0);

}  // namespace betascope
