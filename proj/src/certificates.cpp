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

#include "betascope/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "betascope/beta.hpp"
#include "betascope/error.hpp"

namespace betascope {

CertificateParams CertificateParams::defaults(std::size_t dimension) {
    CertificateParams p;
    const double rn = std::sqrt(static_cast<double>(dimension));
    p.a = 3.0 + 6.0 * rn;
    p.epsilon = 3.0 / (2.0 * p.a * std::sqrt(6.0));
    p.m_log = 1 + static_cast<int>(std::floor(std::log2(3.0 * rn)));
    return p;
}

void CertificateParams::validate(std::size_t dimension) const {
    const double rn = std::sqrt(static_cast<double>(dimension));
    if (a < 3.0 + 6.0 * rn - 1e-12)
        throw InputError("CertificateParams: a must be >= 3 + 6 sqrt(n)");
    if (epsilon > 3.0 / (2.0 * a * std::sqrt(6.0)) + 1e-12)
        throw InputError("CertificateParams: epsilon must be <= 3/(2 a sqrt(6))");
    if (!(r0 > 0.0)) throw InputError("CertificateParams: r0 must be positive");
    if (radii_per_octave < 1) throw InputError("CertificateParams: radii_per_octave >= 1");
}

namespace {

// Fallback finest scale for measures that do not carry one: the median
// nearest-neighbor distance of a sample of atoms.
double estimate_resolution(const DiscreteMeasure& mu) {
    const std::size_t n = mu.size();
    if (n < 2) return 1e-6;
    const std::size_t sample = std::min<std::size_t>(n, 256);
    const std::size_t stride = std::max<std::size_t>(1, n / sample);
    std::vector<double> nn;
    for (std::size_t i = 0; i < n; i += stride) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (std::size_t d = 0; d < mu.dimension(); ++d) {
                const double t = mu.coord(d, i) - mu.coord(d, j);
                d2 += t * t;
            }
            best = std::min(best, d2);
        }
        if (std::isfinite(best) && best > 0.0) nn.push_back(std::sqrt(best));
    }
    if (nn.empty()) return 1e-6;
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    return nn[nn.size() / 2];
}

}  // namespace

double lower_regular_radius_floor(const DiscreteMeasure& mu, int k) {
    const double res =
        mu.resolution_scale() > 0.0 ? mu.resolution_scale() : estimate_resolution(mu);
    return std::min(std::ldexp(1.0, -k), res);
}

std::vector<std::uint32_t> extract_lower_regular(const DiscreteMeasure& mu, int j, int k,
                                                 int radii_per_octave) {
    if (j < 0 || k < 0) throw InputError("extract_lower_regular: j, k must be >= 0");
    if (radii_per_octave < 1) throw InputError("extract_lower_regular: radii_per_octave >= 1");
    const double threshold = std::ldexp(1.0, -j);
    const double r_top = std::ldexp(1.0, -k);
    const double r_floor = lower_regular_radius_floor(mu, k);
    std::vector<std::uint32_t> out;
    std::vector<double> x(mu.dimension());
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d) x[d] = mu.coord(d, i);
        bool pass = true;
        for (int step = 0;; ++step) {
            const double r = r_top * std::pow(2.0, -static_cast<double>(step) / radii_per_octave);
            if (r < r_floor) break;
            if (ball_mass(mu, x, r) < threshold * r) {
                pass = false;
                break;
            }
        }
        if (pass) out.push_back(i);
    }
    return out;
}

namespace {

struct CandidateSet {
    std::unordered_set<CoordsKey, CoordsKeyHash> keys;
};

// All cubes at `level` whose lambda-dilation can meet the occupied cells.
std::vector<CoordsKey> dilation_candidates(const CellMap& occupied, double lambda,
                                           std::size_t n) {
    const std::int64_t reach = static_cast<std::int64_t>(std::floor((lambda + 1.0) / 2.0)) + 1;
    std::unordered_set<CoordsKey, CoordsKeyHash> out;
    std::vector<std::int64_t> off(n, -reach);
    for (const auto& [key, atoms] : occupied) {
        std::fill(off.begin(), off.end(), -reach);
        while (true) {
            CoordsKey cand = key;
            for (std::size_t d = 0; d < n; ++d) cand.c[d] += off[d];
            out.insert(std::move(cand));
            std::size_t d = 0;
            for (; d < n; ++d) {
                if (++off[d] <= reach) break;
                off[d] = -reach;
            }
            if (d == n) break;
        }
    }
    return {out.begin(), out.end()};
}

std::vector<std::vector<double>> scratch_points(const GatherScratch& sc) {
    std::vector<std::vector<double>> pts(sc.count(), std::vector<double>(sc.cols.size()));
    for (std::size_t i = 0; i < sc.count(); ++i)
        for (std::size_t d = 0; d < sc.cols.size(); ++d) pts[i][d] = sc.global(d, i);
    return pts;
}

DiscreteMeasure measure_from_points(const std::vector<std::vector<double>>& pts,
                                    std::size_t dims) {
    DiscreteMeasure m(dims);
    for (const auto& p : pts) m.add(p, 1.0);
    return m;
}

// Conservative upper value of beta_Gamma(aQ) from a polyline sampling:
// the thinnest sample slab radius plus half the sampling step, normalized
// by diam(aQ). Samples are gathered from the box inflated by spacing/2 so
// curve points near the boundary stay covered.
double beta_gamma_upper(const DiscreteMeasure& samples, const AtomIndex& sample_index,
                        const DyadicCube& q, double a, double spacing) {
    Box region = dilate(q, a);
    Box inflated = region;
    for (double& h : inflated.half_sides) h += spacing / 2.0;
    GatherScratch sc;
    gather_box(samples, sample_index, q.level, inflated, sc);
    if (sc.count() == 0) return 0.0;
    const auto pts = scratch_points(sc);
    double radius;
    if (samples.dimension() == 2) {
        radius = min_width_2d(pts).width / 2.0;
    } else {
        const BetaResult b = beta_sup(pts, inflated);
        radius = b.value * inflated.diam();
    }
    return (radius + spacing / 2.0) / region.diam();
}

}  // namespace

PartitionResult partition_cubes(const DiscreteMeasure& nu,
                                const std::vector<std::uint32_t>& e_atoms,
                                const PolyCurve& curve, const CertificateParams& params,
                                int depth) {
    const std::size_t n = nu.dimension();
    params.validate(n);
    if (curve.vertices().empty()) throw InputError("partition_cubes: empty curve");
    std::vector<double> lo, hi;
    curve.bounds(lo, hi);
    double curve_diam2 = 0.0;
    for (std::size_t d = 0; d < n; ++d) curve_diam2 += (hi[d] - lo[d]) * (hi[d] - lo[d]);
    const double on_tol = 1e-9 * std::max(1.0, std::sqrt(curve_diam2));
    std::vector<double> x(n);
    for (std::uint32_t i : e_atoms) {
        for (std::size_t d = 0; d < n; ++d) x[d] = nu.coord(d, i);
        if (curve_distance(x, curve) > on_tol)
            throw InputError("partition_cubes: E atom " + std::to_string(i) +
                             " does not lie on the curve");
    }

    const int l0 = level_for_scale(params.r0);
    if (depth < l0) throw InputError("partition_cubes: depth shallower than r0 level");
    const GridConvention conv{Closure::half_open, 0};
    AtomIndex nu_index(nu, l0, depth, conv);
    BetaSqCache beta_cache(nu, nu_index);

    PartitionResult out;
    out.sampling_spacing = std::ldexp(1.0, -depth - 2);
    const auto sample_pts = sample_polyline(curve, out.sampling_spacing);
    const DiscreteMeasure samples = measure_from_points(sample_pts, n);
    const AtomIndex sample_index(samples, l0, depth, conv);

    std::vector<char> is_e(nu.size(), 0);
    for (std::uint32_t i : e_atoms) is_e[i] = 1;

    for (int l = l0; l <= depth; ++l) {
        // Deterministic order: sort the occupied cells.
        std::vector<CoordsKey> cells;
        for (const auto& [key, atoms] : nu_index.level(l)) cells.push_back(key);
        std::sort(cells.begin(), cells.end(),
                  [](const CoordsKey& a, const CoordsKey& b) { return a.c < b.c; });
        for (const auto& key : cells) {
            CubeInfo info;
            info.cube = DyadicCube{l, key.c, conv};
            const auto* atoms = nu_index.cell_atoms(l, key);
            for (std::uint32_t i : *atoms) {
                info.mass_q += nu.weight(i);
                if (is_e[i]) info.mass_eq += nu.weight(i);
            }
            if (info.mass_eq <= 0.0) {
                info.family = CubeFamily::inactive;
                out.partition.inactive.push_back(info.cube);
            } else {
                info.beta2_sq = beta_cache.beta_sq(info.cube);
                info.beta_gamma_up =
                    beta_gamma_upper(samples, sample_index, info.cube, params.a,
                                     out.sampling_spacing);
                const double eps_beta = params.epsilon * std::sqrt(info.beta2_sq);
                if (eps_beta <= info.beta_gamma_up) {
                    info.family = CubeFamily::curve_dominated;
                    out.partition.curve_dominated.push_back(info.cube);
                } else {
                    info.family = CubeFamily::measure_dominated;
                    out.partition.measure_dominated.push_back(info.cube);
                }
            }
            out.info.push_back(std::move(info));
        }
    }
    return out;
}

CertificateReport splitting_certificate(const DiscreteMeasure& nu,
                                     const std::vector<std::uint32_t>& e_atoms,
                                     const PolyCurve& curve, const CertificateParams& params_in,
                                     int depth) {
    const std::size_t n = nu.dimension();
    CertificateParams params = params_in;
    if (params.a <= 0.0) {
        CertificateParams def = CertificateParams::defaults(n);
        def.c_E = params.c_E;
        def.r0 = params.r0;
        def.radii_per_octave = params.radii_per_octave;
        params = def;
    }

    CertificateReport rep;
    rep.dimension = n;
    rep.depth = depth;
    rep.a = params.a;
    rep.epsilon = params.epsilon;
    rep.r0 = params.r0;
    rep.curve_length = curve.length();

    // Hypothesis: nu(B(x,r)) >= c_E r for all E atoms down to the resolution
    // scale. A nonpositive c_E requests the measured constant.
    const int k_from_r0 = level_for_scale(params.r0);
    const double r_top = params.r0;
    const double r_floor = lower_regular_radius_floor(nu, k_from_r0);
    double c_measured = std::numeric_limits<double>::infinity();
    rep.hypothesis_ok = true;
    std::vector<double> x(n);
    for (std::uint32_t i : e_atoms) {
        for (std::size_t d = 0; d < n; ++d) x[d] = nu.coord(d, i);
        for (int step = 0;; ++step) {
            const double r =
                r_top * std::pow(2.0, -static_cast<double>(step) / params.radii_per_octave);
            if (r < r_floor) break;
            const double ratio = ball_mass(nu, x, r) / r;
            c_measured = std::min(c_measured, ratio);
            if (params.c_E > 0.0 && ratio < params.c_E * (1.0 - 1e-12)) {
                rep.hypothesis_ok = false;
                if (rep.violation.empty()) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "atom %u at r=%.6g: ratio %.6g < c_E %.6g",
                                  i, r, ratio, params.c_E);
                    rep.violation = buf;
                }
            }
        }
    }
    rep.c_E = params.c_E > 0.0 ? params.c_E : (std::isfinite(c_measured) ? c_measured : 0.0);
    if (!(rep.c_E > 0.0)) {
        rep.hypothesis_ok = false;
        if (rep.violation.empty()) rep.violation = "no positive lower-regularity constant";
    }
    params.c_E = rep.c_E;

    const PartitionResult part = partition_cubes(nu, e_atoms, curve, params, depth);
    rep.count_inactive = part.partition.inactive.size();
    rep.count_curve_dominated = part.partition.curve_dominated.size();
    rep.count_measure_dominated = part.partition.measure_dominated.size();

    const double eps_inv2 = 1.0 / (params.epsilon * params.epsilon);
    for (const CubeInfo& info : part.info) {
        if (info.family == CubeFamily::inactive) continue;
        const double diam_q = info.cube.diam();
        rep.lhs_by_cubes += info.beta2_sq * diam_q * info.mass_eq / info.mass_q;
        if (info.family == CubeFamily::curve_dominated) {
            rep.term_I += info.beta2_sq * diam_q;
            rep.bound_I += eps_inv2 * info.beta_gamma_up * info.beta_gamma_up * diam_q;
        } else {
            rep.term_II += info.beta2_sq * diam_q;
        }
    }

    // Per-atom assembly of the same integral (the decomposition identity).
    {
        const int l0 = level_for_scale(params.r0);
        const GridConvention conv{Closure::half_open, 0};
        AtomIndex nu_index(nu, l0, depth, conv);
        BetaSqCache cache(nu, nu_index);
        for (std::uint32_t i : e_atoms) {
            for (std::size_t d = 0; d < n; ++d) x[d] = nu.coord(d, i);
            const JonesProfile p = jones_normalized(cache, x, params.r0, depth, i);
            rep.lhs_integral += nu.weight(i) * p.total();
        }
    }
    const double identity_scale =
        std::max({std::abs(rep.lhs_integral), std::abs(rep.lhs_by_cubes), 1e-30});
    rep.identity_ok =
        std::abs(rep.lhs_integral - rep.lhs_by_cubes) <= 1e-12 * identity_scale + 1e-30;

    // Unrestricted (truncated) TST sum over every cube whose a-dilation can
    // meet the curve.
    {
        const int l0 = level_for_scale(params.r0);
        const GridConvention conv{Closure::half_open, 0};
        const double spacing = part.sampling_spacing;
        const auto sample_pts = sample_polyline(curve, spacing);
        DiscreteMeasure samples(n);
        for (const auto& p : sample_pts) samples.add(p, 1.0);
        const AtomIndex sample_index(samples, l0, depth, conv);
        for (int l = l0; l <= depth; ++l) {
            for (const CoordsKey& key :
                 dilation_candidates(sample_index.level(l), params.a, n)) {
                const DyadicCube q{l, key.c, conv};
                const double bg = beta_gamma_upper(samples, sample_index, q, params.a, spacing);
                rep.bound_I_full += eps_inv2 * bg * bg * q.diam();
            }
        }
    }

    // nu off the curve: atoms farther than the on-curve tolerance.
    {
        std::vector<double> lo, hi;
        curve.bounds(lo, hi);
        double cd2 = 0.0;
        for (std::size_t d = 0; d < n; ++d) cd2 += (hi[d] - lo[d]) * (hi[d] - lo[d]);
        const double tol = 1e-9 * std::max(1.0, std::sqrt(cd2));
        for (std::uint32_t i = 0; i < nu.size(); ++i) {
            for (std::size_t d = 0; d < n; ++d) x[d] = nu.coord(d, i);
            if (curve_distance(x, curve) > tol) rep.nu_off_curve += nu.weight(i);
        }
    }
    rep.bound_II = (1600.0 / 3.0) * std::pow(4.0, static_cast<double>(n)) *
                   std::sqrt(static_cast<double>(n)) / rep.c_E * rep.nu_off_curve;
    rep.term2_ok = rep.term_II <= rep.bound_II * (1.0 + 1e-9) + 1e-30;
    rep.combined_ok =
        rep.lhs_integral <= (rep.bound_I_full + rep.term_II) * (1.0 + 1e-9) + 1e-30;
    return rep;
}

std::string CertificateReport::to_text() const {
    std::ostringstream os;
    char buf[256];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        os << buf;
    };
    os << "certificate = curve_splitting\n";
    put("n", static_cast<double>(dimension));
    put("depth", depth);
    put("a", a);
    put("epsilon", epsilon);
    put("c_E", c_E);
    put("r0", r0);
    put("curve_length", curve_length);
    put("nu_off_curve", nu_off_curve);
    put("lhs_integral", lhs_integral);
    put("lhs_by_cubes", lhs_by_cubes);
    put("term_I", term_I);
    put("term_II", term_II);
    put("bound_I", bound_I);
    put("bound_I_full", bound_I_full);
    put("bound_II", bound_II);
    put("count_inactive", static_cast<double>(count_inactive));
    put("count_curve_dominated", static_cast<double>(count_curve_dominated));
    put("count_measure_dominated", static_cast<double>(count_measure_dominated));
    os << "hypothesis_ok = " << (hypothesis_ok ? "pass" : "fail") << "\n";
    os << "identity_ok = " << (identity_ok ? "pass" : "fail") << "\n";
    os << "term2_ok = " << (term2_ok ? "pass" : "fail") << "\n";
    os << "combined_ok = " << (combined_ok ? "pass" : "fail") << "\n";
    if (!violation.empty()) os << "violation = " << violation << "\n";
    return os.str();
}

TstResult tst_sum(const std::vector<std::vector<double>>& points, int depth, double lambda) {
    TstResult out;
    if (points.empty()) return out;
    const std::size_t n = points[0].size();
    DiscreteMeasure pm(n);
    for (const auto& p : points) pm.add(p, 1.0);
    const GridConvention conv{Closure::half_open, 0};
    const AtomIndex index(pm, 0, depth, conv);
    for (int l = 0; l <= depth; ++l) {
        double subtotal = 0.0;
        for (const CoordsKey& key : dilation_candidates(index.level(l), lambda, n)) {
            const DyadicCube q{l, key.c, conv};
            const Box region = dilate(q, lambda);
            GatherScratch sc;
            gather_box(pm, index, l, region, sc);
            if (sc.count() == 0) continue;
            const BetaResult b = beta_sup(scratch_points(sc), region);
            subtotal += b.value * b.value * q.diam();
        }
        out.per_level[l] = subtotal;
        out.total += subtotal;
    }
    return out;
}

AncestorScalingCheck ancestor_scaling_check(const std::vector<std::vector<double>>& points,
                                            int depth) {
    AncestorScalingCheck out;
    if (points.empty()) return out;
    const std::size_t n = points[0].size();
    const double a = 3.0 + 6.0 * std::sqrt(static_cast<double>(n));
    const int m = static_cast<int>(std::ceil(std::log2(a)));
    const double factor = 3.0 * std::ldexp(1.0, m) / a;
    DiscreteMeasure pm(n);
    for (const auto& p : points) pm.add(p, 1.0);
    const GridConvention conv{Closure::half_open, 0};
    const AtomIndex index(pm, 0, depth, conv);
    GatherScratch sc;
    for (int l = 0; l <= depth; ++l) {
        for (const CoordsKey& key : dilation_candidates(index.level(l), a, n)) {
            const DyadicCube q{l, key.c, conv};
            const Box aq = dilate(q, a);
            gather_box(pm, index, l, aq, sc);
            if (sc.count() == 0) continue;
            ++out.cubes_checked;
            const DyadicCube anc = ancestor(q, m);
            const Box big = dilate(anc, 3.0);
            for (std::size_t d = 0; d < n; ++d)
                if (aq.lo(d) < big.lo(d) || aq.hi(d) > big.hi(d)) out.containment_ok = false;
            const BetaResult lhs = beta_sup(scratch_points(sc), aq);
            // The ancestor box needs its own gather at the ancestor level.
            const BetaResult rhs = beta_sup(points, big);
            out.max_beta_violation =
                std::max(out.max_beta_violation, lhs.value - factor * rhs.value);
        }
    }
    return out;
}

WhitneyClassCheck whitney_class_check(const DiscreteMeasure& nu,
                                        const PartitionResult& partition,
                                        const std::vector<WhitneyCube>& whitney) {
    WhitneyClassCheck out;
    out.worst_margin = std::numeric_limits<int>::max();
    const std::size_t n = nu.dimension();
    const double log_term = std::floor(std::log2(3.0 * std::sqrt(static_cast<double>(n))));
    std::vector<double> x(n);
    for (const CubeInfo& info : partition.info) {
        if (info.family != CubeFamily::measure_dominated) continue;
        const int k0 = info.cube.level;
        const int k1 = k0 - 1 - static_cast<int>(log_term);
        const Box three_q = dilate(info.cube, 3.0);
        for (const WhitneyCube& t : whitney) {
            // nu(T n 3Q) > 0: some atom lies in both.
            bool carries = false;
            for (std::uint32_t i = 0; i < nu.size() && !carries; ++i) {
                for (std::size_t d = 0; d < n; ++d) x[d] = nu.coord(d, i);
                carries = three_q.contains(x, Closure::closed) && t.cube.contains(x);
            }
            if (!carries) continue;
            ++out.pairs_checked;
            out.worst_margin = std::min(out.worst_margin, t.k_class - k1);
            if (t.k_class < k1) out.ok = false;
        }
    }
    if (out.pairs_checked == 0) out.worst_margin = 0;
    return out;
}

}  // namespace betascope
