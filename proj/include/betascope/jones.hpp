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
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "betascope/beta.hpp"
#include "betascope/grid.hpp"
#include "betascope/linefit.hpp"
#include "betascope/measure.hpp"

namespace betascope {

enum class JonesVariant { ordinary, normalized, lerman };
std::string to_string(JonesVariant v);

/// Identity of a cube within the family of shifted grids.
struct CubeId {
    std::uint32_t shift_mask = 0;
    int level = 0;
    std::vector<std::int64_t> coords;
    std::string to_string() const;
};

struct JonesTerm {
    int level = 0;
    CubeId cube;
    double term = 0.0;
};

/// Per-point multiscale profile: one summand per cube containing the point,
/// grouped by level, with running partial sums.
struct JonesProfile {
    std::int64_t atom_index = -1;  // -1 for free query points
    JonesVariant variant = JonesVariant::ordinary;
    double start_scale = 1.0;
    std::vector<JonesTerm> per_level_terms;
    std::vector<double> partial_sums;  // aligned with per_level_terms
    int truncation_level = 0;

    double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
    /// Sum of the terms at one level (the lerman variant can carry several).
    double level_increment(int level) const;
};

/// Integer parameters of the shifted-grid variant: admissible ancestor
/// cubes R satisfy 2^j0 <= side R / side Q <= 2^j1.
struct LermanParams {
    int j0_star = 2;
    int j1_star = 4;
    /// Quantitative curve-learning values: j0 = 2,
    /// j1 = 16 * ceil(6480 e sqrt(n)). Far too coarse for desk-scale data;
    /// selectable but not the experiment default.
    static LermanParams theorem_defaults(std::size_t dimension);
    void validate() const;
};

/// Write-once cache of beta2^2(mu, 3Q) keyed by cube, shared by all
/// profiles over one measure/index pair.
class BetaSqCache {
public:
    BetaSqCache(const DiscreteMeasure& mu, const AtomIndex& index, double lambda = 3.0);
    double beta_sq(const DyadicCube& q);
    const DiscreteMeasure& measure() const { return *mu_; }
    const AtomIndex& index() const { return *index_; }
    double lambda() const { return lambda_; }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<int, CoordsKey>& k) const noexcept {
            return CoordsKeyHash{}(k.second) * 1099511628211ull ^
                   static_cast<std::size_t>(k.first);
        }
    };
    const DiscreteMeasure* mu_;
    const AtomIndex* index_;
    double lambda_;
    std::unordered_map<std::pair<int, CoordsKey>, double, KeyHash> cache_;
};

/// Smallest level whose cubes have side <= r.
int level_for_scale(double r);

/// Ordinary L2 Jones profile: sums beta2^2(mu,3Q) over the half-open
/// default-grid cubes containing x with side <= r, levels up to `depth`.
JonesProfile jones_ordinary(BetaSqCache& cache, std::span<const double> x, double r, int depth,
                            std::int64_t atom_index = -1);

/// Density-normalized variant: each term is multiplied by diam(Q)/mu(Q);
/// cubes with mu(Q) = 0 contribute 0.
JonesProfile jones_normalized(BetaSqCache& cache, std::span<const double> x, double r, int depth,
                              std::int64_t atom_index = -1);

/// Start-scale truncation evaluated two ways: the profile-total difference
/// J(r) - J(r2) and the directly summed terms of the levels lying between
/// the two start scales. The two agree to roundoff.
struct TruncationDelta {
    double from_profiles = 0.0;
    double from_terms = 0.0;
};
TruncationDelta truncation_delta(BetaSqCache& cache, std::span<const double> x, double r,
                                 double r2, int depth, JonesVariant variant);

/// Shifted-grid machinery for the Lerman variant: per-shift atom indexes
/// plus per-cube caches of best-fit lines.
class ShiftedGrids {
public:
    ShiftedGrids(const DiscreteMeasure& mu, int level_min, int level_max);
    const AtomIndex& index(std::uint32_t shift_mask) const;
    const DiscreteMeasure& measure() const { return *mu_; }
    int level_min() const { return level_min_; }
    int level_max() const { return level_max_; }
    std::uint32_t shift_count() const { return 1u << mu_->dimension(); }

private:
    const DiscreteMeasure* mu_;
    int level_min_, level_max_;
    std::vector<std::unique_ptr<AtomIndex>> indexes_;
};

/// All admissible ancestors R (any shifted grid, size ratio in
/// [2^j0, 2^j1]) that contain q. Exposed for exhaustive-enumeration tests.
std::vector<DyadicCube> beta_hat_family(const ShiftedGrids& grids, const DyadicCube& q,
                                        const LermanParams& params);

/// Lerman's beta-hat: sup over admissible ancestors R and their L2 best
/// fit lines of the normalized integral over Q of (dist/diam Q)^2.
/// mu(Q) = 0 gives 0.
double beta_hat(const ShiftedGrids& grids, const DyadicCube& q, const LermanParams& params);

/// Modified Jones profile over the union of shifted grids: per level one
/// term per shift whose half-open cube contains x.
JonesProfile jones_lerman(const ShiftedGrids& grids, std::span<const double> x, double r,
                          int depth, const LermanParams& params, std::int64_t atom_index = -1);

/// Check of the density-vs-ordinary comparison along a cube chain: with
/// M = max mu(Q)/diam(Q) over the chain, every ordinary term is bounded by
/// M times the normalized term.
struct DensityComparison {
    double m_constant = 0.0;
    bool ok_termwise = true;
    bool ok_total = true;
    double max_violation = 0.0;  // positive part of lhs - M*rhs
};
DensityComparison density_comparison_check(BetaSqCache& cache, std::span<const double> x, double r, int depth);

/// Space-separated profile export: one line per term,
/// "atom_index variant level term partial_sum".
std::string format_profile(const JonesProfile& profile);

}  // namespace betascope
