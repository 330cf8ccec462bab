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

#include <cstddef>
#include <cstdint>

// Dense arithmetic kernels over column-major (structure-of-arrays) point
// data. Every kernel exists as a portable scalar reference and, on x86-64
// hardware that supports it, an AVX2 variant selected once at startup.
// The two variants use identical per-element arithmetic (no FMA, contraction
// disabled) so that comparison masks and per-element values match bit for
// bit; only the order of reduction differs.
//
// `cols` is an array of `dims` pointers, each to `count` doubles.

namespace betascope::kern {

struct KernelOps {
    // Sum of w[i] over atoms with |x_i - center|^2 <= r2 (closed ball).
    double (*ball_mass)(const double* const* cols, const double* w, std::size_t dims,
                        std::size_t count, const double* center, double r2);

    // Weighted moments: out_mass = sum w; out_first[d] = sum w*x_d;
    // out_second[packed upper triangle, row-major: (d,e) d<=e] = sum w*x_d*x_e.
    void (*moments)(const double* const* cols, const double* w, std::size_t dims,
                    std::size_t count, double* out_mass, double* out_first,
                    double* out_second);

    // Sum of w[i] * dist^2(x_i, line through `point` with unit `dir`),
    // evaluated in rejection form |t - dir*(t.dir)|^2 so exactly-collinear
    // data stays at the epsilon^2 noise floor.
    double (*line_residual)(const double* const* cols, const double* w, std::size_t dims,
                            std::size_t count, const double* point, const double* dir);

    // Minimum squared distance from `point` to any of `count` segments,
    // given as SoA endpoint columns a_cols/b_cols. Returns +inf for count 0.
    double (*polyline_dist2)(const double* const* a_cols, const double* const* b_cols,
                             std::size_t dims, std::size_t count, const double* point);

    // Sum of zw[k] * c^2(x, y, z_k) where c is the Menger curvature
    // (4*area / product of side lengths; 0 for degenerate triples). The
    // area uses the base-height form with base xy, which keeps the noise
    // floor at machine epsilon even for collinear triples.
    double (*menger_row)(const double* const* z_cols, const double* zw, std::size_t dims,
                         std::size_t count, const double* x, const double* y);

    const char* name;
};

/// Portable reference implementation, always available.
const KernelOps& scalar_ops();

/// AVX2 implementation, or nullptr when unsupported by compiler or CPU.
const KernelOps* avx2_ops();

/// Runtime-selected implementation. Honors BETASCOPE_SIMD=scalar|avx2|auto
/// (read once on first call).
const KernelOps& ops();

/// Collinearity guard used by both menger kernels: triples whose area falls
/// below kMengerAreaGuard times the squared diameter count as flat.
inline constexpr double kMengerAreaGuard = 1e-14;
inline constexpr double kMengerGuardC = 16.0 * (kMengerAreaGuard * kMengerAreaGuard);

/// Menger curvature squared of one triple, base-height evaluation with
/// base xy. Callers wanting bitwise permutation symmetry canonicalize the
/// argument order first (see betascope::menger).
double menger_sq_points(const double* x, const double* y, const double* z, std::size_t dims);

}  // namespace betascope::kern
