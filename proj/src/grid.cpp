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

#include "betascope/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "betascope/error.hpp"

namespace betascope {

namespace {

void check_level(int level) {
    if (level > kMaxLevel || level < -kMaxLevel)
        throw InputError("dyadic level out of range [-48, 48]: " + std::to_string(level));
}

std::int64_t floor_to_int64(double t) {
    const double f = std::floor(t);
    if (!(f >= -4.6e18 && f <= 4.6e18))
        throw InputError("point coordinate out of lattice range");
    return static_cast<std::int64_t>(f);
}

// Corner coordinate scaled so both {0,1/3} shifts and dyadic positions are
// integers: value * 3 * 2^ref_level, with ref_level >= max(level, 0).
__int128 scaled_corner(int shift_bit, std::int64_t coord, int level, int ref_level) {
    const int up = ref_level - level;  // >= 0 by construction
    __int128 v = static_cast<__int128>(3) * coord;
    v <<= up;
    if (shift_bit) v += static_cast<__int128>(1) << ref_level;
    return v;
}

}  // namespace

double Box::diam() const {
    double s = 0.0;
    for (double h : half_sides) s += 4.0 * h * h;
    return std::sqrt(s);
}

bool Box::contains(std::span<const double> x, Closure closure) const {
    for (std::size_t d = 0; d < center.size(); ++d) {
        if (closure == Closure::closed) {
            if (x[d] < lo(d) || x[d] > hi(d)) return false;
        } else {
            if (x[d] < lo(d) || x[d] >= hi(d)) return false;
        }
    }
    return true;
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }
double DyadicCube::diam() const { return std::sqrt(static_cast<double>(dimension())) * side(); }
double DyadicCube::lower(std::size_t d) const {
    return convention.shift_coord(d) + static_cast<double>(coords[d]) * side();
}
double DyadicCube::upper(std::size_t d) const {
    return convention.shift_coord(d) + static_cast<double>(coords[d] + 1) * side();
}
double DyadicCube::center(std::size_t d) const {
    return convention.shift_coord(d) + (static_cast<double>(coords[d]) + 0.5) * side();
}

Box DyadicCube::box() const {
    Box b;
    const std::size_t n = dimension();
    b.center.resize(n);
    b.half_sides.assign(n, 0.5 * side());
    for (std::size_t d = 0; d < n; ++d) b.center[d] = center(d);
    return b;
}

bool DyadicCube::contains(std::span<const double> x) const {
    for (std::size_t d = 0; d < dimension(); ++d) {
        if (convention.closure == Closure::half_open) {
            if (x[d] < lower(d) || x[d] >= upper(d)) return false;
        } else {
            if (x[d] < lower(d) || x[d] > upper(d)) return false;
        }
    }
    return true;
}

std::string DyadicCube::id_string() const {
    std::ostringstream os;
    os << '(' << convention.shift_mask << ',' << level;
    for (std::int64_t c : coords) os << ',' << c;
    os << ')';
    return os.str();
}

std::vector<DyadicCube> cube_containing(std::span<const double> x, int level,
                                        const GridConvention& convention) {
    check_level(level);
    const std::size_t n = x.size();
    const double inv_side = std::ldexp(1.0, level);
    std::vector<std::vector<std::int64_t>> options(n);
    for (std::size_t d = 0; d < n; ++d) {
        const double t = (x[d] - convention.shift_coord(d)) * inv_side;
        const std::int64_t c = floor_to_int64(t);
        options[d].push_back(c);
        if (convention.closure == Closure::closed && t == static_cast<double>(c))
            options[d].push_back(c - 1);
    }
    std::vector<DyadicCube> out;
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        DyadicCube q;
        q.level = level;
        q.convention = convention;
        q.coords.resize(n);
        for (std::size_t d = 0; d < n; ++d) q.coords[d] = options[d][pick[d]];
        out.push_back(std::move(q));
        std::size_t d = 0;
        for (; d < n; ++d) {
            if (++pick[d] < options[d].size()) break;
            pick[d] = 0;
        }
        if (d == n) break;
    }
    return out;
}

DyadicCube ancestor(const DyadicCube& q, int k) {
    if (k < 0) throw InputError("ancestor: k must be >= 0");
    check_level(q.level - k);
    DyadicCube a;
    a.level = q.level - k;
    a.convention = q.convention;
    a.coords.resize(q.coords.size());
    for (std::size_t d = 0; d < q.coords.size(); ++d) a.coords[d] = q.coords[d] >> k;
    return a;
}

Box dilate(const DyadicCube& q, double lambda) {
    if (!(lambda >= 1.0)) throw InputError("dilate: lambda must be >= 1");
    Box b = q.box();
    const double h = lambda * q.side() * 0.5;
    for (double& hs : b.half_sides) hs = h;
    return b;
}

bool cube_contains_cube(const DyadicCube& outer, const DyadicCube& inner) {
    if (outer.dimension() != inner.dimension()) return false;
    const int ref = std::max({outer.level, inner.level, 0});
    for (std::size_t d = 0; d < outer.dimension(); ++d) {
        const int so = (outer.convention.shift_mask >> d) & 1u;
        const int si = (inner.convention.shift_mask >> d) & 1u;
        const __int128 out_lo = scaled_corner(so, outer.coords[d], outer.level, ref);
        const __int128 out_hi = scaled_corner(so, outer.coords[d] + 1, outer.level, ref);
        const __int128 in_lo = scaled_corner(si, inner.coords[d], inner.level, ref);
        const __int128 in_hi = scaled_corner(si, inner.coords[d] + 1, inner.level, ref);
        if (in_lo < out_lo || in_hi > out_hi) return false;
    }
    return true;
}

AtomIndex::AtomIndex(const DiscreteMeasure& mu, int level_min, int level_max,
                     const GridConvention& convention)
    : mu_(&mu), level_min_(level_min), level_max_(level_max), convention_(convention) {
    if (level_min > level_max) throw InputError("AtomIndex: level_min must be <= level_max");
    check_level(level_min);
    check_level(level_max);
    levels_.resize(static_cast<std::size_t>(level_max - level_min + 1));
    const std::size_t n = mu.dimension();
    std::vector<double> p(n);
    for (int l = level_min; l <= level_max; ++l) {
        CellMap& map = levels_[static_cast<std::size_t>(l - level_min)];
        const double inv_side = std::ldexp(1.0, l);
        for (std::uint32_t i = 0; i < mu.size(); ++i) {
            if (convention.closure == Closure::half_open) {
                CoordsKey key;
                key.c.resize(n);
                for (std::size_t d = 0; d < n; ++d)
                    key.c[d] = floor_to_int64((mu.coord(d, i) - convention.shift_coord(d)) *
                                              inv_side);
                map[std::move(key)].push_back(i);
            } else {
                for (std::size_t d = 0; d < n; ++d) p[d] = mu.coord(d, i);
                for (const DyadicCube& q : cube_containing(p, l, convention))
                    map[CoordsKey{q.coords}].push_back(i);
            }
        }
    }
}

const CellMap& AtomIndex::level(int l) const {
    if (!has_level(l))
        throw InputError("AtomIndex: level " + std::to_string(l) + " not indexed");
    return levels_[static_cast<std::size_t>(l - level_min_)];
}

double AtomIndex::cell_mass(int l, const CoordsKey& key) const {
    const auto* atoms = cell_atoms(l, key);
    if (!atoms) return 0.0;
    double m = 0.0;
    for (std::uint32_t i : *atoms) m += mu_->weight(i);
    return m;
}

const std::vector<std::uint32_t>* AtomIndex::cell_atoms(int l, const CoordsKey& key) const {
    const CellMap& map = level(l);
    auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
}

void GatherScratch::reset(std::size_t dims) {
    cols.resize(dims);
    for (auto& c : cols) c.clear();
    weights.clear();
    col_ptrs.resize(dims);
    origin.assign(dims, 0.0);
}

void GatherScratch::set_origin(std::span<const double> o) {
    origin.assign(o.begin(), o.end());
}

void GatherScratch::push(const DiscreteMeasure& mu, std::uint32_t atom) {
    for (std::size_t d = 0; d < cols.size(); ++d)
        cols[d].push_back(mu.coord(d, atom) - origin[d]);
    weights.push_back(mu.weight(atom));
}

void GatherScratch::finish() {
    for (std::size_t d = 0; d < cols.size(); ++d) col_ptrs[d] = cols[d].data();
}

void gather_box(const DiscreteMeasure& mu, const AtomIndex& index, int level, const Box& box,
                GatherScratch& scratch) {
    const std::size_t n = mu.dimension();
    scratch.reset(n);
    scratch.set_origin(box.center);
    const CellMap& map = index.level(level);
    if (map.empty()) {
        scratch.finish();
        return;
    }
    const double inv_side = std::ldexp(1.0, level);
    std::vector<std::int64_t> cmin(n), cmax(n);
    double cells = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double s = index.convention().shift_coord(d);
        cmin[d] = floor_to_int64((box.lo(d) - s) * inv_side);
        cmax[d] = floor_to_int64((box.hi(d) - s) * inv_side);
        cells *= static_cast<double>(cmax[d] - cmin[d] + 1);
    }
    auto inside = [&](std::uint32_t i) {
        for (std::size_t d = 0; d < n; ++d) {
            const double x = mu.coord(d, i);
            if (x < box.lo(d) || x > box.hi(d)) return false;
        }
        return true;
    };
    if (cells > static_cast<double>(map.size())) {
        // Few occupied cells: scan the map instead of the coordinate range.
        for (const auto& [key, atoms] : map) {
            bool in_range = true;
            for (std::size_t d = 0; d < n; ++d)
                if (key.c[d] < cmin[d] || key.c[d] > cmax[d]) {
                    in_range = false;
                    break;
                }
            if (!in_range) continue;
            for (std::uint32_t i : atoms)
                if (inside(i)) scratch.push(mu, i);
        }
    } else {
        CoordsKey key;
        key.c = cmin;
        while (true) {
            auto it = map.find(key);
            if (it != map.end())
                for (std::uint32_t i : it->second)
                    if (inside(i)) scratch.push(mu, i);
            std::size_t d = 0;
            for (; d < n; ++d) {
                if (++key.c[d] <= cmax[d]) break;
                key.c[d] = cmin[d];
            }
            if (d == n) break;
        }
    }
    scratch.finish();
}

void gather_cell(const DiscreteMeasure& mu, const AtomIndex& index, int level,
                 const CoordsKey& key, GatherScratch& scratch) {
    const std::size_t n = mu.dimension();
    scratch.reset(n);
    DyadicCube q{level, key.c, index.convention()};
    std::vector<double> o(n);
    for (std::size_t d = 0; d < n; ++d) o[d] = q.center(d);
    scratch.set_origin(o);
    if (const auto* atoms = index.cell_atoms(level, key))
        for (std::uint32_t i : *atoms) scratch.push(mu, i);
    scratch.finish();
}

}  // namespace betascope
