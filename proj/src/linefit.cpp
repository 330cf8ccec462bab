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

#include "betascope/linefit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

namespace {

constexpr double kTieRelTol = 1e-12;

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double dist_point_line(std::span<const double> x, const Line& line) {
    double proj = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d)
        proj += (x[d] - line.point[d]) * line.direction[d];
    double r2 = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double r = (x[d] - line.point[d]) - proj * line.direction[d];
        r2 += r * r;
    }
    return std::sqrt(r2);
}

SymmetricEigen jacobi_eigen(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    std::vector<std::vector<double>> a = matrix;
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (std::sqrt(off) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[p][k], vkq = v[q][k];
                    v[p][k] = c * vkp - s * vkq;
                    v[q][k] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a[order[i]][order[i]];
        out.vectors[i] = v[order[i]];
        const double nv = norm(out.vectors[i]);
        if (nv > 0.0)
            for (double& x : out.vectors[i]) x /= nv;
    }
    return out;
}

namespace {

// Lexicographically largest unit vector of the span of `basis` whose first
// nonzero coordinate is positive: the normalized projection of the first
// standard basis vector that meets the span.
std::vector<double> lex_max_unit(const std::vector<std::vector<double>>& basis, std::size_t n) {
    for (std::size_t d = 0; d < n; ++d) {
        std::vector<double> proj(n, 0.0);
        for (const auto& b : basis) {
            const double dot = b[d];
            for (std::size_t k = 0; k < n; ++k) proj[k] += dot * b[k];
        }
        const double len = norm(proj);
        if (len > 1e-9) {
            for (double& x : proj) x /= len;
            if (proj[d] < 0.0)
                for (double& x : proj) x = -x;
            return proj;
        }
    }
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    return e;
}

std::vector<double> canonical_sign(std::vector<double> v) {
    for (double x : v) {
        if (x > 0.0) break;
        if (x < 0.0) {
            for (double& y : v) y = -y;
            break;
        }
    }
    return v;
}

}  // namespace

LineFitResult fit_line_soa(const double* const* cols, const double* w, std::size_t dims,
                           std::size_t count) {
    double mass = 0.0;
    std::vector<double> first(dims, 0.0);
    std::vector<double> second(dims * (dims + 1) / 2, 0.0);
    kern::ops().moments(cols, w, dims, count, &mass, first.data(), second.data());
    if (!(mass > 0.0)) throw DegenerateInputError("fit_line_soa: zero mass in region");

    LineFitResult res;
    res.mass = mass;
    res.centroid.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) res.centroid[d] = first[d] / mass;

    // Central second-moment matrix M = sum w (x-c)(x-c)^T.
    std::vector<std::vector<double>> m(dims, std::vector<double>(dims, 0.0));
    std::size_t p = 0;
    for (std::size_t d = 0; d < dims; ++d)
        for (std::size_t e = d; e < dims; ++e, ++p) {
            const double central = second[p] - first[d] * first[e] / mass;
            m[d][e] = central;
            m[e][d] = central;
        }

    const SymmetricEigen eig = jacobi_eigen(m);
    const double lambda_max = eig.values[0];

    const double tie_tol = kTieRelTol * std::max(std::abs(lambda_max), 1e-300);
    std::vector<std::vector<double>> tied;
    for (std::size_t i = 0; i < dims; ++i)
        if (lambda_max - eig.values[i] <= tie_tol) tied.push_back(eig.vectors[i]);

    res.line.point = res.centroid;
    res.line.direction =
        tied.size() > 1 ? lex_max_unit(tied, dims) : canonical_sign(tied.front());
    for (auto& t : tied) t = canonical_sign(std::move(t));
    res.tied_directions = std::move(tied);
    // Rejection-form residual at the fitted line: stable where the
    // trace-minus-eigenvalue difference would drown in roundoff.
    res.residual = kern::ops().line_residual(cols, w, dims, count, res.centroid.data(),
                                             res.line.direction.data());
    return res;
}

LineFitResult best_fit_line(const DiscreteMeasure& mu, const Box& region) {
    if (mu.dimension() != region.dimension())
        throw InputError("best_fit_line: region dimension mismatch");
    GatherScratch scratch;
    scratch.reset(mu.dimension());
    scratch.set_origin(region.center);
    std::vector<double> x(mu.dimension());
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d) x[d] = mu.coord(d, i);
        if (region.contains(x, Closure::closed)) scratch.push(mu, i);
    }
    scratch.finish();
    LineFitResult res = fit_line_soa(scratch.col_ptrs.data(), scratch.weights.data(),
                                     mu.dimension(), scratch.count());
    for (std::size_t d = 0; d < mu.dimension(); ++d) {
        res.line.point[d] += region.center[d];
        res.centroid[d] += region.center[d];
    }
    return res;
}

}  // namespace betascope
