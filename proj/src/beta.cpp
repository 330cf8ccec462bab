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

#include "betascope/beta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

namespace {

std::vector<double> axis_direction(std::size_t n) {
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    return e;
}

BetaResult zero_beta(const Box& region) {
    BetaResult r;
    r.value = 0.0;
    r.mass = 0.0;
    r.diameter = region.diam();
    r.witness.point = region.center;
    r.witness.direction = axis_direction(region.dimension());
    return r;
}

BetaResult beta2_from_scratch(const GatherScratch& scratch, const Box& region) {
    const std::size_t n = region.dimension();
    if (scratch.count() == 0) return zero_beta(region);
    LineFitResult fit = fit_line_soa(scratch.col_ptrs.data(), scratch.weights.data(), n,
                                     scratch.count());
    BetaResult r;
    r.mass = fit.mass;
    r.diameter = region.diam();
    r.witness = fit.line;
    for (std::size_t d = 0; d < n; ++d) r.witness.point[d] += scratch.origin[d];
    const double denom = fit.mass * r.diameter * r.diameter;
    double v2 = denom > 0.0 ? fit.residual / denom : 0.0;
    v2 = std::clamp(v2, 0.0, 1.0);
    r.value = std::sqrt(v2);
    return r;
}

}  // namespace

BetaResult beta2_region(const DiscreteMeasure& mu, const Box& region) {
    if (mu.dimension() != region.dimension())
        throw InputError("beta2_region: region dimension mismatch");
    GatherScratch scratch;
    scratch.reset(mu.dimension());
    scratch.set_origin(region.center);
    std::vector<double> x(mu.dimension());
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d) x[d] = mu.coord(d, i);
        if (region.contains(x, Closure::closed)) scratch.push(mu, i);
    }
    scratch.finish();
    return beta2_from_scratch(scratch, region);
}

BetaResult beta2(const DiscreteMeasure& mu, const AtomIndex& index, const DyadicCube& q,
                 double lambda) {
    const Box region = dilate(q, lambda);
    GatherScratch scratch;
    gather_box(mu, index, q.level, region, scratch);
    return beta2_from_scratch(scratch, region);
}

std::vector<std::vector<double>> convex_hull_2d(std::vector<std::vector<double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.size();
    if (m <= 2) return pts;
    auto cross = [](const std::vector<double>& o, const std::vector<double>& a,
                    const std::vector<double>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::vector<double>> hull(2 * m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = m - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Width2D min_width_2d(const std::vector<std::vector<double>>& pts) {
    Width2D out;
    out.slab_normal = {0.0, 1.0};
    const auto hull = convex_hull_2d(pts);
    if (hull.size() <= 2) {
        if (hull.size() == 2) {
            const double dx = hull[1][0] - hull[0][0];
            const double dy = hull[1][1] - hull[0][1];
            const double len = std::hypot(dx, dy);
            if (len > 0.0) out.slab_normal = {-dy / len, dx / len};
        }
        return out;  // width 0
    }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t h = hull.size();
    for (std::size_t i = 0; i < h; ++i) {
        const auto& p = hull[i];
        const auto& q = hull[(i + 1) % h];
        const double ex = q[0] - p[0];
        const double ey = q[1] - p[1];
        const double len = std::hypot(ex, ey);
        if (len == 0.0) continue;
        double far = 0.0;
        for (const auto& v : hull) {
            const double c = (ex * (v[1] - p[1]) - ey * (v[0] - p[0])) / len;
            far = std::max(far, c);  // CCW hull keeps every vertex on one side
        }
        if (far < best) {
            best = far;
            out.slab_normal = {-ey / len, ex / len};
        }
    }
    out.width = best;
    return out;
}

namespace {

// Minimum enclosing ball (Welzl, move-to-front) in low dimension.
struct Ball {
    std::vector<double> center;
    double r2 = -1.0;
    bool contains(std::span<const double> p, double slack) const {
        if (r2 < 0.0) return false;
        double d2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) {
            const double t = p[i] - center[i];
            d2 += t * t;
        }
        return d2 <= r2 * (1.0 + slack) + 1e-300;
    }
};

Ball ball_of_support(const std::vector<std::vector<double>>& s, std::size_t dim) {
    Ball b;
    if (s.empty()) return b;
    if (s.size() == 1) {
        b.center = s[0];
        b.r2 = 0.0;
        return b;
    }
    const std::size_t m = s.size() - 1;
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        double bi = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double vi = s[i + 1][d] - s[0][d];
            bi += vi * vi;
        }
        for (std::size_t j = 0; j < m; ++j) {
            double aij = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                aij += (s[i + 1][d] - s[0][d]) * (s[j + 1][d] - s[0][d]);
            a[i][j] = 2.0 * aij;
        }
        a[i][m] = bi;
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-30) return b;  // degenerate support
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    b.center = s[0];
    for (std::size_t i = 0; i < m; ++i) {
        const double lam = a[i][m] / a[i][i];
        for (std::size_t d = 0; d < dim; ++d) b.center[d] += lam * (s[i + 1][d] - s[0][d]);
    }
    b.r2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double t = s[0][d] - b.center[d];
        b.r2 += t * t;
    }
    return b;
}

Ball welzl(std::vector<std::vector<double>>& pts, std::size_t end,
           std::vector<std::vector<double>>& support, std::size_t dim) {
    if (end == 0 || support.size() == dim + 1) return ball_of_support(support, dim);
    Ball b = welzl(pts, end - 1, support, dim);
    if (b.contains(pts[end - 1], 1e-12)) return b;
    support.push_back(pts[end - 1]);
    b = welzl(pts, end - 1, support, dim);
    support.pop_back();
    // Move-to-front keeps hot support points early.
    auto p = pts[end - 1];
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(end - 1));
    pts.insert(pts.begin(), std::move(p));
    return b;
}

double min_ball_radius(std::vector<std::vector<double>> pts, std::size_t dim) {
    if (pts.empty()) return 0.0;
    std::vector<std::vector<double>> support;
    const Ball b = welzl(pts, pts.size(), support, dim);
    return b.r2 > 0.0 ? std::sqrt(b.r2) : 0.0;
}

// Radius of the thinnest enclosing cylinder with axis direction u.
double cylinder_radius(const std::vector<std::vector<double>>& pts,
                       const std::vector<double>& u) {
    const std::size_t n = u.size();
    // Orthonormal basis of the complement of u via Gram-Schmidt on axes.
    std::vector<std::vector<double>> basis;
    for (std::size_t d = 0; d < n && basis.size() < n - 1; ++d) {
        std::vector<double> v(n, 0.0);
        v[d] = 1.0;
        double du = u[d];
        for (std::size_t k = 0; k < n; ++k) v[k] -= du * u[k];
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += v[k] * b[k];
            for (std::size_t k = 0; k < n; ++k) v[k] -= dot * b[k];
        }
        double len = 0.0;
        for (double x : v) len += x * x;
        len = std::sqrt(len);
        if (len > 1e-8) {
            for (double& x : v) x /= len;
            basis.push_back(std::move(v));
        }
    }
    std::vector<std::vector<double>> proj(pts.size(), std::vector<double>(basis.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += pts[i][k] * basis[j][k];
            proj[i][j] = dot;
        }
    return min_ball_radius(std::move(proj), basis.size());
}

std::vector<double> normalize_or_axis(std::vector<double> v) {
    double len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (len < 1e-12) return axis_direction(v.size());
    for (double& x : v) x /= len;
    return v;
}

}  // namespace

BetaResult beta_sup(const std::vector<std::vector<double>>& points, const Box& region) {
    const std::size_t n = region.dimension();
    std::vector<std::vector<double>> in;
    for (const auto& p : points) {
        if (p.size() != n) throw InputError("beta_sup: point dimension mismatch");
        if (region.contains(p, Closure::closed)) in.push_back(p);
    }
    BetaResult r = zero_beta(region);
    r.mass = static_cast<double>(in.size());
    if (in.size() <= 2) {
        if (in.size() == 2) {
            std::vector<double> dir(n);
            for (std::size_t d = 0; d < n; ++d) dir[d] = in[1][d] - in[0][d];
            r.witness.point = in[0];
            r.witness.direction = normalize_or_axis(std::move(dir));
        } else if (in.size() == 1) {
            r.witness.point = in[0];
        }
        return r;
    }

    if (n == 2) {
        const Width2D w = min_width_2d(in);
        r.value = (w.width / 2.0) / r.diameter;
        r.witness.direction = {-w.slab_normal[1], w.slab_normal[0]};
        // Slab centerline: shift the extreme offsets to their midpoint.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& p : in) {
            const double off = p[0] * w.slab_normal[0] + p[1] * w.slab_normal[1];
            lo = std::min(lo, off);
            hi = std::max(hi, off);
        }
        const double mid = 0.5 * (lo + hi);
        r.witness.point = {mid * w.slab_normal[0], mid * w.slab_normal[1]};
        r.exactness = BetaExactness::exact;
        return r;
    }

    // n >= 3: multi-start local search over cylinder axis directions.
    std::vector<std::vector<double>> starts;
    {
        GatherScratch sc;
        sc.reset(n);
        sc.origin.assign(n, 0.0);
        std::vector<double> w(in.size(), 1.0);
        std::vector<std::vector<double>> cols(n, std::vector<double>(in.size()));
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t d = 0; d < n; ++d) cols[d][i] = in[i][d];
        std::vector<const double*> cp(n);
        for (std::size_t d = 0; d < n; ++d) cp[d] = cols[d].data();
        LineFitResult fit = fit_line_soa(cp.data(), w.data(), n, in.size());
        starts.push_back(fit.line.direction);
    }
    for (std::size_t d = 0; d < n; ++d) {
        std::vector<double> e(n, 0.0);
        e[d] = 1.0;
        starts.push_back(std::move(e));
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < 24; ++k) {
        std::vector<double> v(n);
        for (double& x : v) x = unit(rng);
        starts.push_back(normalize_or_axis(std::move(v)));
    }

    double best_r = std::numeric_limits<double>::infinity();
    std::vector<double> best_u = axis_direction(n);
    for (auto u : starts) {
        double cur = cylinder_radius(in, u);
        double step = 0.4;
        while (step > 1e-7) {
            bool improved = false;
            for (std::size_t d = 0; d < n && !improved; ++d) {
                for (double sgn : {1.0, -1.0}) {
                    std::vector<double> cand = u;
                    cand[d] += sgn * step;
                    cand = normalize_or_axis(std::move(cand));
                    const double val = cylinder_radius(in, cand);
                    if (val < cur - 1e-15) {
                        cur = val;
                        u = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (cur < best_r) {
            best_r = cur;
            best_u = u;
        }
    }
    r.value = best_r / r.diameter;
    r.witness.direction = best_u;
    r.witness.point = in[0];
    r.exactness = BetaExactness::heuristic;

    // Sanity floor: the L2 beta of the counting measure never exceeds the
    // sup beta, so a heuristic result below it missed the optimum.
    DiscreteMeasure counting(n);
    for (const auto& p : in) counting.add(p, 1.0);
    const BetaResult b2 = beta2_region(counting, region);
    if (r.value < b2.value) r.value = b2.value;
    return r;
}

BetaResult beta_sup_of_support(const DiscreteMeasure& mu, const Box& region) {
    std::vector<std::vector<double>> pts;
    for (std::uint32_t i = 0; i < mu.size(); ++i)
        if (mu.weight(i) > 0.0) pts.push_back(mu.position(i));
    return beta_sup(pts, region);
}

}  // namespace betascope
