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

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <vector>

// AVX2 variants of the dense kernels, 4 doubles per lane group. Per-element
// arithmetic mirrors the scalar reference exactly (same operation order, no
// FMA); only reductions across lanes reassociate. Dimensions 2 and 3 carry
// vector paths; everything else falls through to the scalar reference.

namespace betascope::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    const double a = _mm_cvtsd_f64(lo);
    const double b = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    return a < b ? a : b;
}

double ball_mass(const double* const* cols, const double* w, std::size_t dims,
                 std::size_t count, const double* center, double r2) {
    if (dims != 2 && dims != 3) return scalar_ops().ball_mass(cols, w, dims, count, center, r2);
    const __m256d vr2 = _mm256_set1_pd(r2);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d d2 = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d t =
                _mm256_sub_pd(_mm256_loadu_pd(cols[d] + i), _mm256_set1_pd(center[d]));
            d2 = _mm256_add_pd(d2, _mm256_mul_pd(t, t));
        }
        const __m256d mask = _mm256_cmp_pd(d2, vr2, _CMP_LE_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + i)));
    }
    double tail = 0.0;
    for (; i < count; ++i) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double t = cols[d][i] - center[d];
            d2 += t * t;
        }
        if (d2 <= r2) tail += w[i];
    }
    return hsum(acc) + tail;
}

void moments(const double* const* cols, const double* w, std::size_t dims, std::size_t count,
             double* out_mass, double* out_first, double* out_second) {
    if (dims != 2 && dims != 3) {
        scalar_ops().moments(cols, w, dims, count, out_mass, out_first, out_second);
        return;
    }
    const std::size_t pairs = dims * (dims + 1) / 2;
    __m256d vmass = _mm256_setzero_pd();
    __m256d vfirst[3] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
    __m256d vsecond[6];
    for (std::size_t p = 0; p < pairs; ++p) vsecond[p] = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d wi = _mm256_loadu_pd(w + i);
        vmass = _mm256_add_pd(vmass, wi);
        __m256d x[3];
        for (std::size_t d = 0; d < dims; ++d) x[d] = _mm256_loadu_pd(cols[d] + i);
        std::size_t p = 0;
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d wx = _mm256_mul_pd(wi, x[d]);
            vfirst[d] = _mm256_add_pd(vfirst[d], wx);
            for (std::size_t e = d; e < dims; ++e, ++p)
                vsecond[p] = _mm256_add_pd(vsecond[p], _mm256_mul_pd(wx, x[e]));
        }
    }
    double mass = hsum(vmass);
    for (std::size_t d = 0; d < dims; ++d) out_first[d] = hsum(vfirst[d]);
    for (std::size_t p = 0; p < pairs; ++p) out_second[p] = hsum(vsecond[p]);
    for (; i < count; ++i) {
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
    if (dims != 2 && dims != 3)
        return scalar_ops().line_residual(cols, w, dims, count, point, dir);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d proj = _mm256_setzero_pd();
        __m256d t[3];
        for (std::size_t d = 0; d < dims; ++d) {
            t[d] = _mm256_sub_pd(_mm256_loadu_pd(cols[d] + i), _mm256_set1_pd(point[d]));
            proj = _mm256_add_pd(proj, _mm256_mul_pd(t[d], _mm256_set1_pd(dir[d])));
        }
        __m256d r2 = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d r = _mm256_sub_pd(t[d], _mm256_mul_pd(proj, _mm256_set1_pd(dir[d])));
            r2 = _mm256_add_pd(r2, _mm256_mul_pd(r, r));
        }
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), r2));
    }
    double tail = 0.0;
    for (; i < count; ++i) {
        double proj = 0.0;
        for (std::size_t d = 0; d < dims; ++d) proj += (cols[d][i] - point[d]) * dir[d];
        double r2 = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double r = (cols[d][i] - point[d]) - proj * dir[d];
            r2 += r * r;
        }
        tail += w[i] * r2;
    }
    return hsum(acc) + tail;
}

double polyline_dist2(const double* const* a_cols, const double* const* b_cols, std::size_t dims,
                      std::size_t count, const double* point) {
    if (dims != 2 && dims != 3)
        return scalar_ops().polyline_dist2(a_cols, b_cols, dims, count, point);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d len2 = _mm256_setzero_pd();
        __m256d dot = _mm256_setzero_pd();
        __m256d a[3], b[3];
        for (std::size_t d = 0; d < dims; ++d) {
            a[d] = _mm256_loadu_pd(a_cols[d] + i);
            b[d] = _mm256_loadu_pd(b_cols[d] + i);
            const __m256d e = _mm256_sub_pd(b[d], a[d]);
            len2 = _mm256_add_pd(len2, _mm256_mul_pd(e, e));
            dot = _mm256_add_pd(dot,
                                _mm256_mul_pd(e, _mm256_sub_pd(_mm256_set1_pd(point[d]), a[d])));
        }
        const __m256d positive = _mm256_cmp_pd(len2, zero, _CMP_GT_OQ);
        __m256d t = _mm256_div_pd(dot, len2);
        t = _mm256_blendv_pd(zero, t, positive);
        t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
        __m256d d2 = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d q = _mm256_sub_pd(
                _mm256_add_pd(a[d], _mm256_mul_pd(t, _mm256_sub_pd(b[d], a[d]))),
                _mm256_set1_pd(point[d]));
            d2 = _mm256_add_pd(d2, _mm256_mul_pd(q, q));
        }
        best = _mm256_min_pd(best, d2);
    }
    double tail_best = hmin(best);
    for (; i < count; ++i) {
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
        if (d2 < tail_best) tail_best = d2;
    }
    return tail_best;
}

double menger_row(const double* const* z_cols, const double* zw, std::size_t dims,
                  std::size_t count, const double* x, const double* y) {
    if (dims != 2 && dims != 3) return scalar_ops().menger_row(z_cols, zw, dims, count, x, y);
    double qxy_s = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
        const double u = y[d] - x[d];
        qxy_s += u * u;
    }
    const __m256d qxy = _mm256_set1_pd(qxy_s);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d guardc = _mm256_set1_pd(kMengerGuardC);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d qxz = zero, qyz = zero, dot = zero;
        __m256d v[3];
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d zd = _mm256_loadu_pd(z_cols[d] + i);
            const __m256d u = _mm256_set1_pd(y[d] - x[d]);
            v[d] = _mm256_sub_pd(zd, _mm256_set1_pd(x[d]));
            const __m256d w = _mm256_sub_pd(zd, _mm256_set1_pd(y[d]));
            qxz = _mm256_add_pd(qxz, _mm256_mul_pd(v[d], v[d]));
            qyz = _mm256_add_pd(qyz, _mm256_mul_pd(w, w));
            dot = _mm256_add_pd(dot, _mm256_mul_pd(u, v[d]));
        }
        const __m256d t = _mm256_div_pd(dot, qxy);
        __m256d h2 = zero;
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d r =
                _mm256_sub_pd(v[d], _mm256_mul_pd(t, _mm256_set1_pd(y[d] - x[d])));
            h2 = _mm256_add_pd(h2, _mm256_mul_pd(r, r));
        }
        const __m256d sixteen_a2 =
            _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), qxy), h2);
        const __m256d qmax = _mm256_max_pd(_mm256_max_pd(qxy, qxz), qyz);
        const __m256d guard = _mm256_mul_pd(guardc, _mm256_mul_pd(qmax, qmax));
        __m256d mask = _mm256_cmp_pd(sixteen_a2, guard, _CMP_GT_OQ);
        mask = _mm256_and_pd(mask, _mm256_cmp_pd(qxy, zero, _CMP_GT_OQ));
        mask = _mm256_and_pd(mask, _mm256_cmp_pd(qxz, zero, _CMP_GT_OQ));
        mask = _mm256_and_pd(mask, _mm256_cmp_pd(qyz, zero, _CMP_GT_OQ));
        const __m256d c2 =
            _mm256_div_pd(sixteen_a2, _mm256_mul_pd(_mm256_mul_pd(qxy, qxz), qyz));
        const __m256d safe = _mm256_blendv_pd(zero, c2, mask);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(zw + i), safe));
    }
    double tail = 0.0;
    std::vector<double> z(dims);
    for (; i < count; ++i) {
        for (std::size_t d = 0; d < dims; ++d) z[d] = z_cols[d][i];
        tail += zw[i] * menger_sq_points(x, y, z.data(), dims);
    }
    return hsum(acc) + tail;
}

}  // namespace

const KernelOps* avx2_ops() {
#if defined(__GNUC__)
    if (!__builtin_cpu_supports("avx2")) return nullptr;
#endif
    static const KernelOps k{ball_mass, moments, line_residual, polyline_dist2, menger_row,
                             "avx2"};
    return &k;
}

}  // namespace betascope::kern

#else  // !defined(__AVX2__)

namespace betascope::kern {
const KernelOps* avx2_ops() { return nullptr; }
}  // namespace betascope::kern

#endif
