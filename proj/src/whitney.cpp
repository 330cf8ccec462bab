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

#include "betascope/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

PolyCurve PolyCurve::from_vertices(std::vector<std::vector<double>> vertices) {
    if (vertices.empty()) throw InputError("PolyCurve: at least one vertex required");
    PolyCurve c;
    c.dim_ = vertices[0].size();
    if (c.dim_ == 0) throw InputError("PolyCurve: vertex dimension must be >= 1");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].size() != c.dim_) throw InputError("PolyCurve: mixed vertex dimensions");
        if (i > 0 && vertices[i] == vertices[i - 1])
            throw InputError("PolyCurve: consecutive duplicate vertices");
    }
    c.vertices_ = std::move(vertices);
    const std::size_t nseg = c.vertices_.size() > 1 ? c.vertices_.size() - 1 : 1;
    c.a_cols_.assign(c.dim_, {});
    c.b_cols_.assign(c.dim_, {});
    if (c.vertices_.size() == 1) {
        // Degenerate single-point curve: one zero-length segment.
        for (std::size_t d = 0; d < c.dim_; ++d) {
            c.a_cols_[d].push_back(c.vertices_[0][d]);
            c.b_cols_[d].push_back(c.vertices_[0][d]);
        }
        c.seg_count_ = 1;
    } else {
        for (std::size_t s = 0; s + 1 < c.vertices_.size(); ++s) {
            double len2 = 0.0;
            for (std::size_t d = 0; d < c.dim_; ++d) {
                c.a_cols_[d].push_back(c.vertices_[s][d]);
                c.b_cols_[d].push_back(c.vertices_[s + 1][d]);
                const double e = c.vertices_[s + 1][d] - c.vertices_[s][d];
                len2 += e * e;
            }
            c.length_ += std::sqrt(len2);
        }
        c.seg_count_ = nseg;
    }
    c.a_ptrs_.resize(c.dim_);
    c.b_ptrs_.resize(c.dim_);
    for (std::size_t d = 0; d < c.dim_; ++d) {
        c.a_ptrs_[d] = c.a_cols_[d].data();
        c.b_ptrs_[d] = c.b_cols_[d].data();
    }
    return c;
}

std::vector<double> PolyCurve::point_at(double s) const {
    if (vertices_.size() == 1) return vertices_[0];
    s = std::clamp(s, 0.0, length_);
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        double len2 = 0.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            const double e = vertices_[i + 1][d] - vertices_[i][d];
            len2 += e * e;
        }
        const double len = std::sqrt(len2);
        if (s <= len || i + 2 == vertices_.size()) {
            const double t = len > 0.0 ? std::min(s / len, 1.0) : 0.0;
            std::vector<double> p(dim_);
            for (std::size_t d = 0; d < dim_; ++d)
                p[d] = vertices_[i][d] + t * (vertices_[i + 1][d] - vertices_[i][d]);
            return p;
        }
        s -= len;
    }
    return vertices_.back();
}

bool PolyCurve::bounds(std::vector<double>& lo, std::vector<double>& hi) const {
    lo.assign(dim_, std::numeric_limits<double>::infinity());
    hi.assign(dim_, -std::numeric_limits<double>::infinity());
    for (const auto& v : vertices_)
        for (std::size_t d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], v[d]);
            hi[d] = std::max(hi[d], v[d]);
        }
    return !vertices_.empty();
}

double curve_distance(std::span<const double> x, const PolyCurve& curve) {
    if (x.size() != curve.dimension()) throw InputError("curve_distance: dimension mismatch");
    if (curve.vertices().empty()) throw InputError("curve_distance: empty curve");
    const double d2 = kern::ops().polyline_dist2(curve.seg_a_ptrs().data(),
                                                 curve.seg_b_ptrs().data(), curve.dimension(),
                                                 curve.segment_count(), x.data());
    return std::sqrt(d2);
}

namespace {

// Exact squared distance between a closed box and one segment. dist(p,box)^2
// is convex and piecewise quadratic along the segment; cut at the parameter
// values where a coordinate crosses a box face and minimize each piece.
double box_segment_dist2(const Box& box, std::span<const double> a, std::span<const double> b) {
    const std::size_t n = box.dimension();
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t d = 0; d < n; ++d) {
        const double e = b[d] - a[d];
        if (e == 0.0) continue;
        for (double face : {box.lo(d), box.hi(d)}) {
            const double t = (face - a[d]) / e;
            if (t > 0.0 && t < 1.0) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double t0 = cuts[i], t1 = cuts[i + 1];
        if (!(t1 > t0)) continue;
        const double tm = 0.5 * (t0 + t1);
        // Clamp pattern is constant on (t0, t1); assemble the quadratic.
        double qa = 0.0, qb = 0.0, qc = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            const double e = b[d] - a[d];
            const double sm = a[d] + tm * e;
            double c0;
            if (sm < box.lo(d)) c0 = box.lo(d) - a[d];        // (c0 - t e)^2
            else if (sm > box.hi(d)) c0 = box.hi(d) - a[d];   // same form
            else continue;                                    // inside: no contribution
            qa += e * e;
            qb += -2.0 * c0 * e;
            qc += c0 * c0;
        }
        double tstar = tm;
        if (qa > 0.0) tstar = std::clamp(-qb / (2.0 * qa), t0, t1);
        for (double t : {t0, t1, tstar}) {
            const double v = (qa * t + qb) * t + qc;
            if (v < best) best = v;
        }
        if (qa == 0.0 && qc == 0.0) return 0.0;  // segment piece inside the box
    }
    return std::max(0.0, best);
}

}  // namespace

double box_curve_distance(const Box& box, const PolyCurve& curve) {
    if (box.dimension() != curve.dimension())
        throw InputError("box_curve_distance: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> a(curve.dimension()), b(curve.dimension());
    for (std::size_t s = 0; s < curve.segment_count(); ++s) {
        for (std::size_t d = 0; d < curve.dimension(); ++d) {
            a[d] = curve.seg_a_ptrs()[d][s];
            b[d] = curve.seg_b_ptrs()[d][s];
        }
        best = std::min(best, box_segment_dist2(box, a, b));
        if (best == 0.0) break;
    }
    return std::sqrt(best);
}

std::vector<std::vector<double>> sample_polyline(const PolyCurve& curve, double spacing) {
    if (!(spacing > 0.0)) throw InputError("sample_polyline: spacing must be positive");
    std::vector<std::vector<double>> pts;
    const auto& v = curve.vertices();
    if (v.size() == 1) return {v[0]};
    for (std::size_t s = 0; s + 1 < v.size(); ++s) {
        double len2 = 0.0;
        for (std::size_t d = 0; d < curve.dimension(); ++d) {
            const double e = v[s + 1][d] - v[s][d];
            len2 += e * e;
        }
        const double len = std::sqrt(len2);
        const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing)));
        for (int i = 0; i < steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            std::vector<double> p(curve.dimension());
            for (std::size_t d = 0; d < curve.dimension(); ++d)
                p[d] = v[s][d] + t * (v[s + 1][d] - v[s][d]);
            pts.push_back(std::move(p));
        }
    }
    pts.push_back(v.back());
    return pts;
}

int k_class_of(double dist) {
    if (!(dist > 0.0)) throw InputError("k_class_of: distance must be positive");
    int k = static_cast<int>(std::floor(-std::log2(dist))) - 2;
    while (!(dist <= std::ldexp(1.0, -k))) --k;
    while (dist <= std::ldexp(1.0, -k - 1)) ++k;
    return k;
}

namespace {

bool cube_touches_box(const DyadicCube& q, const Box& domain) {
    for (std::size_t d = 0; d < q.dimension(); ++d)
        if (q.upper(d) < domain.lo(d) || q.lower(d) > domain.hi(d)) return false;
    return true;
}

struct DecomposeState {
    const PolyCurve* curve;
    const Box* domain;
    int max_level;
    WhitneyDecomposition out;

    void visit(const DyadicCube& q) {
        if (!cube_touches_box(q, *domain)) return;
        const double diam = q.diam();
        const double dist = box_curve_distance(q.box(), *curve);
        if (dist > 0.0 && dist <= diam && diam <= 4.0 * dist) {
            out.cubes.push_back({q, dist, k_class_of(dist)});
            return;
        }
        if (dist > diam) {
            // Subdividing cannot help: children are no closer and smaller.
            record_unresolved(q, dist);
            return;
        }
        if (q.level >= max_level) {
            record_unresolved(q, dist);
            return;
        }
        DyadicCube child;
        child.level = q.level + 1;
        child.convention = q.convention;
        child.coords.resize(q.dimension());
        const std::size_t n = q.dimension();
        const std::uint64_t combos = 1ull << n;
        for (std::uint64_t m = 0; m < combos; ++m) {
            for (std::size_t d = 0; d < n; ++d)
                child.coords[d] = 2 * q.coords[d] + ((m >> d) & 1ull);
            visit(child);
        }
    }

    void record_unresolved(const DyadicCube& q, double dist) {
        out.unresolved.push_back({q, dist});
        out.unresolved_volume += std::pow(q.side(), static_cast<double>(q.dimension()));
    }
};

}  // namespace

WhitneyDecomposition whitney_decompose(const PolyCurve& curve, const Box& domain,
                                       int max_level) {
    if (curve.dimension() != domain.dimension())
        throw InputError("whitney_decompose: dimension mismatch");
    if (max_level < -kMaxLevel || max_level > kMaxLevel)
        throw InputError("whitney_decompose: max_level out of range");

    double max_side = 0.0;
    for (double h : domain.half_sides) max_side = std::max(max_side, 2.0 * h);
    const double d0 = box_curve_distance(domain, curve);
    // Roots must be big enough to cover the domain and to reach the curve's
    // distance scale (far curves need large cubes before dist <= diam holds).
    const double need = std::max(max_side, d0);
    int root_level = static_cast<int>(std::floor(-std::log2(std::max(need, 1e-300))));
    root_level = std::clamp(root_level, -kMaxLevel, max_level);
    while (std::ldexp(1.0, -root_level) < need && root_level > -kMaxLevel) --root_level;

    DecomposeState st{&curve, &domain, max_level, {}};
    st.out.max_level = max_level;
    const double inv_side = std::ldexp(1.0, root_level);
    const std::size_t n = domain.dimension();
    std::vector<std::int64_t> cmin(n), cmax(n);
    for (std::size_t d = 0; d < n; ++d) {
        cmin[d] = static_cast<std::int64_t>(std::floor(domain.lo(d) * inv_side));
        cmax[d] = static_cast<std::int64_t>(std::floor(domain.hi(d) * inv_side));
    }
    DyadicCube root;
    root.level = root_level;
    root.convention = GridConvention{Closure::half_open, 0};
    root.coords = cmin;
    while (true) {
        st.visit(root);
        std::size_t d = 0;
        for (; d < n; ++d) {
            if (++root.coords[d] <= cmax[d]) break;
            root.coords[d] = cmin[d];
        }
        if (d == n) break;
    }
    return st.out;
}

std::map<int, std::vector<std::size_t>> classify_Tk(const std::vector<WhitneyCube>& cubes) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < cubes.size(); ++i) groups[cubes[i].k_class].push_back(i);
    return groups;
}

}  // namespace betascope
