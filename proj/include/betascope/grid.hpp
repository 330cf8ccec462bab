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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "betascope/measure.hpp"

namespace betascope {

/// Levels deeper than this are rejected so cube sides stay exactly
/// representable and lattice coordinates fit comfortably in 64 bits.
inline constexpr int kMaxLevel = 48;

enum class Closure { closed, half_open };

/// Grid identity: closure convention plus a shift vector in {0, 1/3}^n,
/// encoded as a bitmask (bit d set means coordinate d is shifted by 1/3).
struct GridConvention {
    Closure closure = Closure::half_open;
    std::uint32_t shift_mask = 0;

    double shift_coord(std::size_t d) const { return (shift_mask >> d) & 1u ? 1.0 / 3.0 : 0.0; }
    bool operator==(const GridConvention&) const = default;
};

/// Axis-aligned box given by center and per-axis half-sides.
struct Box {
    std::vector<double> center;
    std::vector<double> half_sides;

    std::size_t dimension() const { return center.size(); }
    double lo(std::size_t d) const { return center[d] - half_sides[d]; }
    double hi(std::size_t d) const { return center[d] + half_sides[d]; }
    double diam() const;
    bool contains(std::span<const double> x, Closure closure = Closure::closed) const;
};

/// Dyadic cube of side 2^-level with integer lattice coordinates; the lower
/// corner sits at shift + coords * side.
struct DyadicCube {
    int level = 0;
    std::vector<std::int64_t> coords;
    GridConvention convention;

    std::size_t dimension() const { return coords.size(); }
    double side() const;
    double diam() const;  // sqrt(n) * side
    double lower(std::size_t d) const;
    double upper(std::size_t d) const;
    double center(std::size_t d) const;
    Box box() const;
    bool contains(std::span<const double> x) const;  // honors closure convention
    std::string id_string() const;                   // "(shift,level,c1,...,cn)"

    bool operator==(const DyadicCube&) const = default;
};

/// Cubes at `level` whose point set contains x. Half-open conventions give
/// exactly one cube; closed conventions give up to 2^n on lattice faces.
std::vector<DyadicCube> cube_containing(std::span<const double> x, int level,
                                        const GridConvention& convention);

/// The unique same-convention cube at level(Q)-k containing Q.
DyadicCube ancestor(const DyadicCube& q, int k);

/// Concentric dilation: same center, half-sides lambda*side/2.
Box dilate(const DyadicCube& q, double lambda);

/// Exact containment of cube `inner` in cube `outer`, possibly across
/// different {0,1/3} shifts. Corner comparisons are done in integer
/// arithmetic (everything scaled by 3 * 2^max_level), so the 1/3 shifts
/// introduce no rounding.
bool cube_contains_cube(const DyadicCube& outer, const DyadicCube& inner);

/// Hashable per-level cell key.
struct CoordsKey {
    std::vector<std::int64_t> c;
    bool operator==(const CoordsKey&) const = default;
};
struct CoordsKeyHash {
    std::size_t operator()(const CoordsKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t v : k.c) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using CellMap = std::unordered_map<CoordsKey, std::vector<std::uint32_t>, CoordsKeyHash>;

/// Per-level map from occupied cube coordinates to atom index lists. For
/// half-open conventions each level partitions the atom indices; for closed
/// conventions boundary atoms appear in every closed cube containing them.
class AtomIndex {
public:
    AtomIndex() = default;
    AtomIndex(const DiscreteMeasure& mu, int level_min, int level_max,
              const GridConvention& convention);

    int level_min() const { return level_min_; }
    int level_max() const { return level_max_; }
    const GridConvention& convention() const { return convention_; }
    const DiscreteMeasure& measure() const { return *mu_; }

    const CellMap& level(int l) const;
    bool has_level(int l) const { return l >= level_min_ && l <= level_max_; }

    /// Mass of a half-open cell (0 when absent).
    double cell_mass(int l, const CoordsKey& key) const;
    const std::vector<std::uint32_t>* cell_atoms(int l, const CoordsKey& key) const;

private:
    const DiscreteMeasure* mu_ = nullptr;
    int level_min_ = 0;
    int level_max_ = -1;
    GridConvention convention_;
    std::vector<CellMap> levels_;
};

/// Contiguous SoA staging area for atoms gathered out of a measure.
/// Coordinates are stored relative to `origin` (box or cell center), which
/// keeps second-moment accumulation well conditioned for small regions far
/// from the global origin.
struct GatherScratch {
    std::vector<std::vector<double>> cols;
    std::vector<double> weights;
    std::vector<const double*> col_ptrs;
    std::vector<double> origin;

    std::size_t count() const { return weights.size(); }
    void reset(std::size_t dims);
    void set_origin(std::span<const double> o);
    void push(const DiscreteMeasure& mu, std::uint32_t atom);
    void finish();
    /// Global position of stored atom i along axis d.
    double global(std::size_t d, std::size_t i) const { return cols[d][i] + origin[d]; }
};

/// Packs the atoms of `mu` lying in the closed box into `scratch`, using
/// the level-`level` cells of `index` as candidates. The box must be
/// covered by cells within `cell_radius` of its own cell footprint (for a
/// lambda-dilated cube at the same level, ceil((lambda+1)/2) suffices).
void gather_box(const DiscreteMeasure& mu, const AtomIndex& index, int level, const Box& box,
                GatherScratch& scratch);

/// Packs exactly the atoms of one half-open cell.
void gather_cell(const DiscreteMeasure& mu, const AtomIndex& index, int level,
                 const CoordsKey& key, GatherScratch& scratch);

}  // namespace betascope
