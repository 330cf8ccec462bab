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

#include "betascope/jones.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

std::string to_string(JonesVariant v) {
    switch (v) {
        case JonesVariant::ordinary: return "ordinary";
        case JonesVariant::normalized: return "normalized";
        case JonesVariant::lerman: return "lerman";
    }
    return "?";
}

std::string CubeId::to_string() const {
    std::ostringstream os;
    os << '(' << shift_mask << ',' << level;
    for (std::int64_t c : coords) os << ',' << c;
    os << ')';
    return os.str();
}

double JonesProfile::level_increment(int level) const {
    double s = 0.0;
    for (const auto& t : per_level_terms)
        if (t.level == level) s += t.term;
    return s;
}

LermanParams LermanParams::theorem_defaults(std::size_t dimension) {
    LermanParams p;
    p.j0_star = 2;
    p.j1_star = 16 * static_cast<int>(std::ceil(6480.0 * std::exp(1.0) *
                                                std::sqrt(static_cast<double>(dimension))));
    return p;
}

void LermanParams::validate() const {
    if (!(2 <= j0_star && j0_star <= j1_star))
        throw InputError("LermanParams: need 2 <= j0_star <= j1_star");
}

int level_for_scale(double r) {
    if (!(r > 0.0)) throw InputError("level_for_scale: scale must be positive");
    int l = static_cast<int>(std::ceil(-std::log2(r)));
    while (std::ldexp(1.0, -l) > r) ++l;
    while (l - 1 >= -kMaxLevel && std::ldexp(1.0, -(l - 1)) <= r) --l;
    return l;
}

BetaSqCache::BetaSqCache(const DiscreteMeasure& mu, const AtomIndex& index, double lambda)
    : mu_(&mu), index_(&index), lambda_(lambda) {}

double BetaSqCache::beta_sq(const DyadicCube& q) {
    auto key = std::make_pair(q.level, CoordsKey{q.coords});
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const BetaResult b = beta2(*mu_, *index_, q, lambda_);
    const double v2 = b.value * b.value;
    cache_.emplace(std::move(key), v2);
    return v2;
}

namespace {

DyadicCube chain_cube(std::span<const double> x, int level, const GridConvention& conv) {
    GridConvention half_open = conv;
    half_open.closure = Closure::half_open;
    return cube_containing(x, level, half_open).front();
}

JonesProfile make_profile(BetaSqCache& cache, std::span<const double> x, double r, int depth,
                          std::int64_t atom_index, bool normalized) {
    const int l0 = level_for_scale(r);
    if (depth < l0)
        throw InputError("jones profile: depth must reach the level of the start scale");
    JonesProfile p;
    p.atom_index = atom_index;
    p.variant = normalized ? JonesVariant::normalized : JonesVariant::ordinary;
    p.start_scale = r;
    p.truncation_level = depth;
    double running = 0.0;
    const GridConvention conv = cache.index().convention();
    for (int l = l0; l <= depth; ++l) {
        const DyadicCube q = chain_cube(x, l, conv);
        double term = 0.0;
        if (normalized) {
            const double mass_q = cache.index().cell_mass(l, CoordsKey{q.coords});
            if (mass_q > 0.0) term = cache.beta_sq(q) * q.diam() / mass_q;
        } else {
            term = cache.beta_sq(q);
        }
        running += term;
        p.per_level_terms.push_back({l, CubeId{conv.shift_mask, l, q.coords}, term});
        p.partial_sums.push_back(running);
    }
    return p;
}

}  // namespace

JonesProfile jones_ordinary(BetaSqCache& cache, std::span<const double> x, double r, int depth,
                            std::int64_t atom_index) {
    return make_profile(cache, x, r, depth, atom_index, false);
}

JonesProfile jones_normalized(BetaSqCache& cache, std::span<const double> x, double r, int depth,
                              std::int64_t atom_index) {
    return make_profile(cache, x, r, depth, atom_index, true);
}

TruncationDelta truncation_delta(BetaSqCache& cache, std::span<const double> x, double r,
                                 double r2, int depth, JonesVariant variant) {
    if (r == r2) return {0.0, 0.0};
    const bool normalized = variant == JonesVariant::normalized;
    if (variant == JonesVariant::lerman)
        throw InputError("truncation_delta: use the ordinary or normalized variant");
    const JonesProfile pa = make_profile(cache, x, r, depth, -1, normalized);
    const JonesProfile pb = make_profile(cache, x, r2, depth, -1, normalized);
    TruncationDelta out;
    out.from_profiles = pa.total() - pb.total();
    // The two sums differ in exactly the levels between the start scales.
    const int la = level_for_scale(r), lb = level_for_scale(r2);
    const JonesProfile& wide = la < lb ? pa : pb;
    const double sign = la < lb ? 1.0 : -1.0;
    double s = 0.0;
    for (const auto& t : wide.per_level_terms)
        if (t.level < std::max(la, lb)) s += t.term;
    out.from_terms = sign * s;
    return out;
}

ShiftedGrids::ShiftedGrids(const DiscreteMeasure& mu, int level_min, int level_max)
    : mu_(&mu), level_min_(level_min), level_max_(level_max) {
    if (mu.dimension() > 20) throw InputError("ShiftedGrids: dimension too large");
    const std::uint32_t count = 1u << mu.dimension();
    indexes_.resize(count);
    for (std::uint32_t s = 0; s < count; ++s)
        indexes_[s] = std::make_unique<AtomIndex>(mu, level_min, level_max,
                                                  GridConvention{Closure::half_open, s});
}

const AtomIndex& ShiftedGrids::index(std::uint32_t shift_mask) const {
    if (shift_mask >= indexes_.size()) throw InputError("ShiftedGrids: bad shift mask");
    return *indexes_[shift_mask];
}

std::vector<DyadicCube> beta_hat_family(const ShiftedGrids& grids, const DyadicCube& q,
                                        const LermanParams& params) {
    params.validate();
    std::vector<DyadicCube> family;
    const std::size_t n = q.dimension();
    std::vector<double> corner(n);
    for (std::size_t d = 0; d < n; ++d) corner[d] = q.lower(d);
    for (std::uint32_t s = 0; s < grids.shift_count(); ++s) {
        const GridConvention conv{Closure::half_open, s};
        for (int j = params.j0_star; j <= params.j1_star; ++j) {
            const int level_r = q.level - j;
            if (level_r < -kMaxLevel) break;
            // Locate the candidate through the (floating) lower corner, then
            // verify containment exactly; scan neighbors if rounding put the
            // corner in the wrong cell.
            DyadicCube cand = cube_containing(corner, level_r, conv).front();
            if (!cube_contains_cube(cand, q)) {
                bool found = false;
                std::vector<std::int64_t> base = cand.coords;
                std::vector<int> off(n, -1);
                while (!found) {
                    for (std::size_t d = 0; d < n; ++d) cand.coords[d] = base[d] + off[d];
                    if (cube_contains_cube(cand, q)) {
                        found = true;
                        break;
                    }
                    std::size_t d = 0;
                    for (; d < n; ++d) {
                        if (++off[d] <= 1) break;
                        off[d] = -1;
                    }
                    if (d == n) break;
                }
                if (!found) continue;
            }
            family.push_back(cand);
        }
    }
    return family;
}

double beta_hat(const ShiftedGrids& grids, const DyadicCube& q, const LermanParams& params) {
    const auto& q_index = grids.index(q.convention.shift_mask);
    GatherScratch q_atoms;
    gather_cell(grids.measure(), q_index, q.level, CoordsKey{q.coords}, q_atoms);
    double mass_q = 0.0;
    for (double w : q_atoms.weights) mass_q += w;
    if (!(mass_q > 0.0)) return 0.0;
    const double diam_q = q.diam();
    const double denom = mass_q * diam_q * diam_q;

    double sup = 0.0;
    GatherScratch r_atoms;
    std::vector<double> local_point(q.dimension());
    for (const DyadicCube& r : beta_hat_family(grids, q, params)) {
        const auto& r_index = grids.index(r.convention.shift_mask);
        if (!r_index.has_level(r.level)) continue;
        gather_cell(grids.measure(), r_index, r.level, CoordsKey{r.coords}, r_atoms);
        if (r_atoms.count() == 0) continue;
        const LineFitResult fit = fit_line_soa(r_atoms.col_ptrs.data(), r_atoms.weights.data(),
                                               q.dimension(), r_atoms.count());
        // Every best-fit line (all tied principal directions) competes in
        // the sup.
        for (const auto& dir : fit.tied_directions) {
            for (std::size_t d = 0; d < q.dimension(); ++d)
                local_point[d] = fit.centroid[d] + r_atoms.origin[d] - q_atoms.origin[d];
            const double resid =
                kern::ops().line_residual(q_atoms.col_ptrs.data(), q_atoms.weights.data(),
                                          q.dimension(), q_atoms.count(), local_point.data(),
                                          dir.data());
            sup = std::max(sup, resid / denom);
        }
    }
    return sup;
}

JonesProfile jones_lerman(const ShiftedGrids& grids, std::span<const double> x, double r,
                          int depth, const LermanParams& params, std::int64_t atom_index) {
    params.validate();
    const int l0 = level_for_scale(r);
    if (depth < l0)
        throw InputError("jones profile: depth must reach the level of the start scale");
    JonesProfile p;
    p.atom_index = atom_index;
    p.variant = JonesVariant::lerman;
    p.start_scale = r;
    p.truncation_level = depth;
    double running = 0.0;
    for (int l = l0; l <= depth; ++l) {
        for (std::uint32_t s = 0; s < grids.shift_count(); ++s) {
            const GridConvention conv{Closure::half_open, s};
            const DyadicCube q = cube_containing(x, l, conv).front();
            const double bh = beta_hat(grids, q, params);
            const double term = bh * bh;
            running += term;
            p.per_level_terms.push_back({l, CubeId{s, l, q.coords}, term});
            p.partial_sums.push_back(running);
        }
    }
    return p;
}

DensityComparison density_comparison_check(BetaSqCache& cache, std::span<const double> x, double r, int depth) {
    const JonesProfile ord = jones_ordinary(cache, x, r, depth);
    const JonesProfile nrm = jones_normalized(cache, x, r, depth);
    DensityComparison out;
    const auto& index = cache.index();
    for (const auto& t : ord.per_level_terms) {
        const double mass_q = index.cell_mass(t.level, CoordsKey{t.cube.coords});
        if (mass_q <= 0.0) continue;
        const DyadicCube q{t.level, t.cube.coords, index.convention()};
        out.m_constant = std::max(out.m_constant, mass_q / q.diam());
    }
    constexpr double kSlack = 1e-9;
    for (std::size_t i = 0; i < ord.per_level_terms.size(); ++i) {
        const double lhs = ord.per_level_terms[i].term;
        const double rhs = out.m_constant * nrm.per_level_terms[i].term;
        out.max_violation = std::max(out.max_violation, lhs - rhs);
        if (lhs > rhs + kSlack) out.ok_termwise = false;
    }
    if (ord.total() > out.m_constant * nrm.total() + kSlack) out.ok_total = false;
    return out;
}

std::string format_profile(const JonesProfile& profile) {
    std::string out;
    char buf[160];
    for (std::size_t i = 0; i < profile.per_level_terms.size(); ++i) {
        const auto& t = profile.per_level_terms[i];
        std::snprintf(buf, sizeof buf, "%lld %s %d %.17g %.17g\n",
                      static_cast<long long>(profile.atom_index),
                      to_string(profile.variant).c_str(), t.level, t.term,
                      profile.partial_sums[i]);
        out += buf;
    }
    return out;
}

}  // namespace betascope
