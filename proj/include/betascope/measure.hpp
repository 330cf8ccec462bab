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
#include <functional>
#include <span>
#include <vector>

namespace betascope {

/// One weighted point mass.
struct Atom {
    std::vector<double> position;
    double weight = 0.0;
};

/// Finite weighted atomic measure on R^n. Atoms are stored column-major
/// (one array per coordinate) so dense kernels can stream them. Immutable
/// once built apart from `add`; all queries are const and thread-safe.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::size_t dimension);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    /// Cached sum of weights, maintained incrementally.
    double total_mass() const { return total_mass_; }

    void add(std::span<const double> position, double weight);
    void add(const Atom& atom) { add(atom.position, atom.weight); }

    /// Appends all atoms of `other` (same dimension) preserving order.
    void append(const DiscreteMeasure& other);

    std::span<const double> coord(std::size_t d) const { return cols_[d]; }
    double coord(std::size_t d, std::size_t i) const { return cols_[d][i]; }
    std::span<const double> weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::vector<double> position(std::size_t i) const;
    Atom atom(std::size_t i) const { return {position(i), weights_[i]}; }

    /// Column pointers for the kernel layer (valid until next add).
    std::vector<const double*> col_ptrs() const;

    /// Finest meaningful scale of the data (0 when unknown). Generators set
    /// this; analyses warn when asked to descend well below it.
    double resolution_scale() const { return resolution_scale_; }
    void set_resolution_scale(double s) { resolution_scale_ = s; }

    /// Coordinate-wise bounding box; false when empty.
    bool bounds(std::vector<double>& lo, std::vector<double>& hi) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<double>> cols_;
    std::vector<double> weights_;
    double total_mass_ = 0.0;
    double resolution_scale_ = 0.0;
};

/// Finite-scale density sweep: ratios mu(B(x,r))/(2r) at geometrically
/// spaced radii (omega_1 = 2).
struct DensityEstimate {
    std::vector<double> center;
    std::vector<double> radii;   // decreasing
    std::vector<double> ratios;  // same length as radii
    double lower_est = 0.0;
    double upper_est = 0.0;
};

/// mu(closed Euclidean ball of radius r about x).
double ball_mass(const DiscreteMeasure& mu, std::span<const double> x, double r);

/// Atoms whose positions satisfy `region`, weights and order unchanged.
DiscreteMeasure restrict(const DiscreteMeasure& mu,
                         const std::function<bool(std::span<const double>)>& region);

/// Evaluates mu(B(x,r))/(2r) at radii r_max * 2^-i, i = 0..num_radii-1.
DensityEstimate density_profile(const DiscreteMeasure& mu, std::span<const double> x,
                                double r_max, int num_radii);

}  // namespace betascope
