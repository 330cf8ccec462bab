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

#include "betascope/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace betascope::kern {

double menger_sq_points(const double* x, const double* y, const double* z, std::size_t dims) {
    double qxy = 0.0, qxz = 0.0, qyz = 0.0, dot = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
        const double u = y[d] - x[d];
        const double v = z[d] - x[d];
        const double w = z[d] - y[d];
        qxy += u * u;
        qxz += v * v;
        qyz += w * w;
        dot += u * v;
    }
    if (qxy <= 0.0 || qxz <= 0.0 || qyz <= 0.0) return 0.0;  // coincident points
    // Height of z over the base line xy: project out the base direction.
    const double t = dot / qxy;
    double h2 = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
        const double r = (z[d] - x[d]) - t * (y[d] - x[d]);
        h2 += r * r;
    }
    const double sixteen_a2 = 4.0 * qxy * h2;
    double qmax = qxy > qxz ? qxy : qxz;
    if (qyz > qmax) qmax = qyz;
    // Guard: Area < kMengerAreaGuard * (squared diameter)  <=>  16 A^2 < 16 g^2 qmax^2.
    const double guard = kMengerGuardC * (qmax * qmax);
    if (!(sixteen_a2 > guard)) return 0.0;
    return sixteen_a2 / ((qxy * qxz) * qyz);
}

namespace scalar {

double ball_mass(const double* const* cols, const double* w, std::size_t dims,
                 std::size_t count, const double* center, double r2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double t = cols[d][i] - center[d];
            d2 += t * t;
        }
        if (d2 <= r2) acc += w[i];
    }
    return acc;
}

void moments(const double* const* cols, const double* w, std::size_t dims, std::size_t count,
             double* out_mass, double* out_first, double* out_second) {
    const std::size_t pairs = dims * (dims + 1) / 2;
    double mass = 0.0;
    for (std::size_t d = 0; d < dims; ++d) out_first[d] = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) out_second[p] = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double wi = w[i];
        mass += wi;
        std::size_t p = 0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double xd = cols[d][i];
            out_first[d] += wi * xd;
            for (std::size_t e = d; e < dims; ++e, ++p) out_second[p] += wi * xd * cols[e][i];
        }
    }
    *out_mass = mass;
}

double line_residual(const double* const* cols, const double* w, std::size_t dims,
                     std::size_t count, const double* point, const double* dir) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double proj = 0.0;
        for (std::size_t d = 0; d < dims; ++d) proj += (cols[d][i] - point[d]) * dir[d];
        double r2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double r = (cols[d][i] - point[d]) - proj * dir[d];
            r2 += r * r;
        }
        acc += w[i] * r2;
    }
    return acc;
}

double polyline_dist2(const double* const* a_cols, const double* const* b_cols,
                      std::size_t dims, std::size_t count, const double* point) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        double len2 = 0.0, dot = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double e = b_cols[d][i] - a_cols[d][i];
            len2 += e * e;
            dot += e * (point[d] - a_cols[d][i]);
        }
        double t = len2 > 0.0 ? dot / len2 : 0.0;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        double d2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double q = a_cols[d][i] + t * (b_cols[d][i] - a_cols[d][i]) - point[d];
            d2 += q * q;
        }
        if (d2 < best) best = d2;
    }
    return best;
}

double menger_row(const double* const* z_cols, const double* zw, std::size_t dims,
                  std::size_t count, const double* x, const double* y) {
    double acc = 0.0;
    std::vector<double> z(dims);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t d = 0; d < dims; ++d) z[d] = z_cols[d][i];
        acc += zw[i] * menger_sq_points(x, y, z.data(), dims);
    }
    return acc;
}

}  // namespace scalar

const KernelOps& scalar_ops() {
    static const KernelOps k{scalar::ball_mass, scalar::moments, scalar::line_residual,
                             scalar::polyline_dist2, scalar::menger_row, "scalar"};
    return k;
}

}  // namespace betascope::kern
