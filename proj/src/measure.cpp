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

#include "betascope/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope {

DiscreteMeasure::DiscreteMeasure(std::size_t dimension) : dim_(dimension), cols_(dimension) {
    if (dimension == 0) throw InputError("measure dimension must be >= 1");
}

void DiscreteMeasure::add(std::span<const double> position, double weight) {
    if (dim_ == 0) {
        dim_ = position.size();
        cols_.resize(dim_);
        if (dim_ == 0) throw InputError("measure dimension must be >= 1");
    }
    if (position.size() != dim_)
        throw InputError("atom dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                         std::to_string(position.size()));
    if (!(weight >= 0.0)) throw InputError("atom weight must be nonnegative and finite");
    for (double c : position)
        if (!std::isfinite(c)) throw InputError("atom coordinates must be finite");
    for (std::size_t d = 0; d < dim_; ++d) cols_[d].push_back(position[d]);
    weights_.push_back(weight);
    total_mass_ += weight;
}

void DiscreteMeasure::append(const DiscreteMeasure& other) {
    if (other.empty()) return;
    if (dim_ != 0 && other.dim_ != dim_) throw InputError("cannot append measure of different dimension");
    if (dim_ == 0) {
        dim_ = other.dim_;
        cols_.resize(dim_);
    }
    for (std::size_t d = 0; d < dim_; ++d)
        cols_[d].insert(cols_[d].end(), other.cols_[d].begin(), other.cols_[d].end());
    weights_.insert(weights_.end(), other.weights_.begin(), other.weights_.end());
    total_mass_ += other.total_mass_;
    resolution_scale_ = std::max(resolution_scale_, other.resolution_scale_);
}

std::vector<double> DiscreteMeasure::position(std::size_t i) const {
    std::vector<double> p(dim_);
    for (std::size_t d = 0; d < dim_; ++d) p[d] = cols_[d][i];
    return p;
}

std::vector<const double*> DiscreteMeasure::col_ptrs() const {
    std::vector<const double*> p(dim_);
    for (std::size_t d = 0; d < dim_; ++d) p[d] = cols_[d].data();
    return p;
}

bool DiscreteMeasure::bounds(std::vector<double>& lo, std::vector<double>& hi) const {
    if (empty()) return false;
    lo.assign(dim_, std::numeric_limits<double>::infinity());
    hi.assign(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t d = 0; d < dim_; ++d)
        for (double v : cols_[d]) {
            lo[d] = std::min(lo[d], v);
            hi[d] = std::max(hi[d], v);
        }
    return true;
}

double ball_mass(const DiscreteMeasure& mu, std::span<const double> x, double r) {
    if (x.size() != mu.dimension())
        throw InputError("ball_mass: query point dimension mismatch");
    if (!(r > 0.0)) throw InputError("ball_mass: radius must be positive");
    if (mu.empty()) return 0.0;
    const auto cols = mu.col_ptrs();
    return kern::ops().ball_mass(cols.data(), mu.weights().data(), mu.dimension(), mu.size(),
                                 x.data(), r * r);
}

DiscreteMeasure restrict(const DiscreteMeasure& mu,
                         const std::function<bool(std::span<const double>)>& region) {
    DiscreteMeasure out(mu.dimension() == 0 ? 1 : mu.dimension());
    std::vector<double> p(mu.dimension());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d) p[d] = mu.coord(d, i);
        if (region(p)) out.add(p, mu.weight(i));
    }
    out.set_resolution_scale(mu.resolution_scale());
    return out;
}

DensityEstimate density_profile(const DiscreteMeasure& mu, std::span<const double> x,
                                double r_max, int num_radii) {
    if (!(r_max > 0.0)) throw InputError("density_profile: r_max must be positive");
    if (num_radii < 1) throw InputError("density_profile: num_radii must be >= 1");
    DensityEstimate est;
    est.center.assign(x.begin(), x.end());
    est.lower_est = std::numeric_limits<double>::infinity();
    est.upper_est = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < num_radii; ++i) {
        const double r = std::ldexp(r_max, -i);
        const double ratio = ball_mass(mu, x, r) / (2.0 * r);
        est.radii.push_back(r);
        est.ratios.push_back(ratio);
        est.lower_est = std::min(est.lower_est, ratio);
        est.upper_est = std::max(est.upper_est, ratio);
    }
    return est;
}

}  // namespace betascope
