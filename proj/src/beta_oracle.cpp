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

#include "betascope/beta_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "betascope/error.hpp"

namespace betascope {

namespace {

constexpr std::size_t kOracleAtomGuard = 200;

struct OraclePoints {
    std::vector<std::vector<double>> x;
    std::vector<double> w;
    std::size_t dims = 0;
};

OraclePoints collect(const DiscreteMeasure& mu, const Box& region) {
    OraclePoints pts;
    pts.dims = mu.dimension();
    std::vector<double> p(pts.dims);
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < pts.dims; ++d) p[d] = mu.coord(d, i);
        if (region.contains(p, Closure::closed)) {
            pts.x.push_back(p);
            pts.w.push_back(mu.weight(i));
        }
    }
    if (pts.x.size() > kOracleAtomGuard)
        throw CostGuardError("beta oracle: more than 200 atoms in region");
    return pts;
}

double dist2_to_line(const std::vector<double>& x, const std::vector<double>& p,
                     const std::vector<double>& u) {
    double n2 = 0.0, proj = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double t = x[d] - p[d];
        n2 += t * t;
        proj += t * u[d];
    }
    const double r = n2 - proj * proj;
    return r > 0.0 ? r : 0.0;
}

std::vector<double> normalized(std::vector<double> v) {
    double len = 0.0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (len == 0.0) {
        v.assign(v.size(), 0.0);
        v[0] = 1.0;
        return v;
    }
    for (double& x : v) x /= len;
    return v;
}

// Orthonormal complement basis of a unit direction.
std::vector<std::vector<double>> complement_basis(const std::vector<double>& u) {
    const std::size_t n = u.size();
    std::vector<std::vector<double>> basis;
    for (std::size_t d = 0; d < n && basis.size() + 1 < n; ++d) {
        std::vector<double> v(n, 0.0);
        v[d] = 1.0;
        const double du = u[d];
        for (std::size_t k = 0; k < n; ++k) v[k] -= du * u[k];
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += v[k] * b[k];
            for (std::size_t k = 0; k < n; ++k) v[k] -= dot * b[k];
        }
        double len = 0.0;
        for (double x : v) len += x * x;
        len = std::sqrt(len);
        if (len > 1e-7) {
            for (double& x : v) x /= len;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

std::vector<std::vector<double>> fibonacci_sphere(int count) {
    std::vector<std::vector<double>> dirs;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden * i;
        dirs.push_back({rad * std::cos(th), rad * std::sin(th), z});
    }
    return dirs;
}

struct LineCandidate {
    std::vector<double> u;  // unit direction
    std::vector<double> p;  // point on line
    double value = std::numeric_limits<double>::infinity();
};

double weighted_residual(const OraclePoints& pts, const std::vector<double>& p,
                         const std::vector<double>& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.x.size(); ++i) acc += pts.w[i] * dist2_to_line(pts.x[i], p, u);
    return acc;
}

void data_extent(const OraclePoints& pts, std::vector<double>& mid, double& radius) {
    const std::size_t n = pts.dims;
    std::vector<double> lo(n, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
    for (const auto& x : pts.x)
        for (std::size_t d = 0; d < n; ++d) {
            lo[d] = std::min(lo[d], x[d]);
            hi[d] = std::max(hi[d], x[d]);
        }
    mid.resize(n);
    radius = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        mid[d] = 0.5 * (lo[d] + hi[d]);
        radius = std::max(radius, 0.5 * (hi[d] - lo[d]));
    }
    if (radius == 0.0) radius = 1.0;
}

// Local refinement: shrink direction/offset perturbation grids around the
// best line found so far.
void refine(const OraclePoints& pts, LineCandidate& cand, double dir_step, double off_step,
            int rounds) {
    for (int r = 0; r < rounds; ++r) {
        bool improved = true;
        while (improved) {
            improved = false;
            const auto basis = complement_basis(cand.u);
            for (const auto& b : basis) {
                for (double sd : {-1.0, 1.0}) {
                    // direction nudge
                    std::vector<double> u2(cand.u);
                    for (std::size_t k = 0; k < u2.size(); ++k) u2[k] += sd * dir_step * b[k];
                    u2 = normalized(std::move(u2));
                    const double v = weighted_residual(pts, cand.p, u2);
                    if (v < cand.value) {
                        cand.value = v;
                        cand.u = u2;
                        improved = true;
                    }
                    // offset nudge
                    std::vector<double> p2(cand.p);
                    for (std::size_t k = 0; k < p2.size(); ++k) p2[k] += sd * off_step * b[k];
                    const double v2 = weighted_residual(pts, p2, cand.u);
                    if (v2 < cand.value) {
                        cand.value = v2;
                        cand.p = p2;
                        improved = true;
                    }
                }
            }
        }
        dir_step *= 0.35;
        off_step *= 0.35;
    }
}

}  // namespace

double beta2_oracle(const DiscreteMeasure& mu, const Box& region) {
    if (mu.dimension() != region.dimension())
        throw InputError("beta2_oracle: region dimension mismatch");
    const OraclePoints pts = collect(mu, region);
    double mass = 0.0;
    for (double w : pts.w) mass += w;
    if (!(mass > 0.0)) return 0.0;
    const double diam = region.diam();
    const std::size_t n = pts.dims;

    std::vector<double> mid;
    double radius = 0.0;
    data_extent(pts, mid, radius);

    // Coarse direction set: grid plus all pairwise atom directions.
    std::vector<std::vector<double>> dirs;
    if (n == 2) {
        const int na = 256;
        for (int i = 0; i < na; ++i) {
            const double th = std::numbers::pi * i / na;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else if (n == 3) {
        dirs = fibonacci_sphere(512);
    } else {
        // crude axis + random-free fallback for higher dimensions
        for (std::size_t d = 0; d < n; ++d) {
            std::vector<double> e(n, 0.0);
            e[d] = 1.0;
            dirs.push_back(std::move(e));
        }
    }
    for (std::size_t i = 0; i < pts.x.size(); ++i)
        for (std::size_t j = i + 1; j < pts.x.size(); ++j) {
            std::vector<double> d(n);
            bool nonzero = false;
            for (std::size_t k = 0; k < n; ++k) {
                d[k] = pts.x[j][k] - pts.x[i][k];
                nonzero |= d[k] != 0.0;
            }
            if (nonzero) dirs.push_back(normalized(std::move(d)));
        }

    // Coarse offsets: per direction, a grid in the complement spanning the
    // data extent around the data midpoint.
    const int noff = n == 2 ? 17 : 9;
    std::vector<LineCandidate> top;
    auto consider = [&](LineCandidate c) {
        top.push_back(std::move(c));
        std::sort(top.begin(), top.end(),
                  [](const LineCandidate& a, const LineCandidate& b) { return a.value < b.value; });
        if (top.size() > 12) top.resize(12);
    };
    for (const auto& u : dirs) {
        const auto basis = complement_basis(u);
        std::vector<int> idx(basis.size(), 0);
        while (true) {
            LineCandidate c;
            c.u = u;
            c.p = mid;
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const double t = (2.0 * idx[b] / (noff - 1) - 1.0) * radius;
                for (std::size_t k = 0; k < n; ++k) c.p[k] += t * basis[b][k];
            }
            c.value = weighted_residual(pts, c.p, c.u);
            consider(std::move(c));
            std::size_t b = 0;
            for (; b < basis.size(); ++b) {
                if (++idx[b] < noff) break;
                idx[b] = 0;
            }
            if (b == basis.size()) break;
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (auto& cand : top) {
        refine(pts, cand, 0.3, 0.3 * radius, 16);
        best = std::min(best, cand.value);
    }
    const double v2 = best / (mass * diam * diam);
    return std::sqrt(std::max(0.0, v2));
}

double beta_sup_oracle(const std::vector<std::vector<double>>& points, const Box& region,
                       int direction_samples) {
    const std::size_t n = region.dimension();
    std::vector<std::vector<double>> in;
    for (const auto& p : points)
        if (region.contains(p, Closure::closed)) in.push_back(p);
    if (in.size() > kOracleAtomGuard)
        throw CostGuardError("beta_sup_oracle: more than 200 points in region");
    if (in.size() <= 1) return 0.0;
    const double diam = region.diam();

    if (n == 2) {
        // For a fixed direction the optimal offset is closed-form: half the
        // extent of normal projections.
        auto extent = [&](double theta) {
            const double nx = -std::sin(theta), ny = std::cos(theta);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : in) {
                const double t = p[0] * nx + p[1] * ny;
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
            return hi - lo;
        };
        double best = std::numeric_limits<double>::infinity();
        double best_th = 0.0;
        for (int i = 0; i < direction_samples; ++i) {
            const double th = std::numbers::pi * i / direction_samples;
            const double e = extent(th);
            if (e < best) {
                best = e;
                best_th = th;
            }
        }
        double step = std::numbers::pi / direction_samples;
        for (int r = 0; r < 40; ++r) {
            for (double s : {-step, step}) {
                const double e = extent(best_th + s);
                if (e < best) {
                    best = e;
                    best_th += s;
                }
            }
            step *= 0.6;
        }
        return (best / 2.0) / diam;
    }

    // n >= 3: direction grid; per direction an approximate 1-center of the
    // complement projections via the farthest-point descent.
    std::vector<std::vector<double>> dirs =
        n == 3 ? fibonacci_sphere(std::max(direction_samples / 16, 64))
               : std::vector<std::vector<double>>{};
    for (std::size_t i = 0; i < in.size(); ++i)
        for (std::size_t j = i + 1; j < in.size(); ++j) {
            std::vector<double> d(n);
            for (std::size_t k = 0; k < n; ++k) d[k] = in[j][k] - in[i][k];
            dirs.push_back(normalized(std::move(d)));
        }
    auto radius_for = [&](const std::vector<double>& u) {
        std::vector<double> c(n, 0.0);
        for (const auto& p : in)
            for (std::size_t k = 0; k < n; ++k) c[k] += p[k] / static_cast<double>(in.size());
        double r = 0.0;
        for (int it = 1; it <= 400; ++it) {
            double far2 = -1.0;
            const std::vector<double>* farp = nullptr;
            for (const auto& p : in) {
                const double d2 = dist2_to_line(p, c, u);
                if (d2 > far2) {
                    far2 = d2;
                    farp = &p;
                }
            }
            r = std::sqrt(std::max(0.0, far2));
            const double stepf = 1.0 / (it + 1.0);
            for (std::size_t k = 0; k < n; ++k) c[k] += stepf * ((*farp)[k] - c[k]);
        }
        return r;
    };
    double best = std::numeric_limits<double>::infinity();
    for (const auto& u : dirs) best = std::min(best, radius_for(u));
    return best / diam;
}

}  // namespace betascope
