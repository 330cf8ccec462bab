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

#include "betascope/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

double menger(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
    if (x.size() != y.size() || y.size() != z.size())
        throw InputError("menger: dimension mismatch");
    // Canonical lexicographic order of the three points makes the value
    // invariant under argument permutations, bit for bit.
    std::array<const double*, 3> p{x.data(), y.data(), z.data()};
    auto lex_less = [&](const double* a, const double* b) {
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (a[d] < b[d]) return true;
            if (a[d] > b[d]) return false;
        }
        return false;
    };
    std::sort(p.begin(), p.end(), lex_less);
    return std::sqrt(kern::menger_sq_points(p[0], p[1], p[2], x.size()));
}

CurvatureEnergy leger_energy(const DiscreteMeasure& mu, EnergyMode mode, std::int64_t samples,
                             std::uint64_t seed) {
    CurvatureEnergy out;
    out.mode = mode;
    const std::size_t n = mu.size();
    const auto cols = mu.col_ptrs();
    const auto& ops = kern::ops();

    if (mode == EnergyMode::exact) {
        if (n > kLegerExactAtomGuard)
            throw CostGuardError("leger_energy: exact mode limited to 2000 atoms");
        // Ordered triples with any repeated atom contribute zero, so the sum
        // is 6x the increasing-triple sum. The inner index runs as a dense
        // row for the kernel.
        std::vector<double> px(mu.dimension()), py(mu.dimension());
        double acc = 0.0;
        for (std::size_t i = 0; i + 2 < n; ++i) {
            for (std::size_t d = 0; d < mu.dimension(); ++d) px[d] = mu.coord(d, i);
            for (std::size_t j = i + 1; j + 1 < n; ++j) {
                for (std::size_t d = 0; d < mu.dimension(); ++d) py[d] = mu.coord(d, j);
                std::vector<const double*> zc(mu.dimension());
                for (std::size_t d = 0; d < mu.dimension(); ++d) zc[d] = cols[d] + j + 1;
                const double row = ops.menger_row(zc.data(), mu.weights().data() + j + 1,
                                                  mu.dimension(), n - j - 1, px.data(),
                                                  py.data());
                acc += mu.weight(i) * mu.weight(j) * row;
            }
        }
        out.value = 6.0 * acc;
        out.sample_count = static_cast<std::int64_t>(n) * (n - 1) * (n - 2);
        return out;
    }

    if (samples < 1) throw InputError("leger_energy: monte_carlo requires samples >= 1");
    const double total = mu.total_mass();
    if (!(total > 0.0) || n < 3) {
        out.sample_count = samples;
        return out;
    }
    // Mass-weighted independent index draws; the estimator is
    // total^3 * mean(c^2) with the usual standard error of the mean.
    std::vector<double> cdf(n);
    double run = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run += mu.weight(i);
        cdf[i] = run;
    }
    std::mt19937_64 rng(seed ^ 0xb5ad4eceda1ce2a9ull);
    std::uniform_real_distribution<double> uni(0.0, run);
    auto draw = [&]() {
        const double u = uni(rng);
        return static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    };
    std::vector<double> px(mu.dimension()), py(mu.dimension()), pz(mu.dimension());
    double sum = 0.0, sum2 = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
        const std::size_t i = draw(), j = draw(), k = draw();
        for (std::size_t d = 0; d < mu.dimension(); ++d) {
            px[d] = mu.coord(d, i);
            py[d] = mu.coord(d, j);
            pz[d] = mu.coord(d, k);
        }
        const double c2 = kern::menger_sq_points(px.data(), py.data(), pz.data(), mu.dimension());
        sum += c2;
        sum2 += c2 * c2;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var =
        std::max(0.0, sum2 / static_cast<double>(samples) - mean * mean);
    const double scale = total * total * total;
    out.value = scale * mean;
    out.std_error = scale * std::sqrt(var / static_cast<double>(samples));
    out.sample_count = samples;
    return out;
}

}  // namespace betascope
