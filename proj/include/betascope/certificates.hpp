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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "betascope/jones.hpp"
#include "betascope/measure.hpp"
#include "betascope/whitney.hpp"

namespace betascope {

/// Constants of the near/far splitting argument. The defaults are the
/// explicit choices a = 3 + 6 sqrt(n) and epsilon = 3/(2 a sqrt(6)) (so
/// that 3 (2/3)^2 a^2 eps^2 = 1/2). c_E <= 0 requests measuring the
/// lower-regularity constant from the data.
struct CertificateParams {
    double a = 0.0;
    double epsilon = 0.0;
    double c_E = 0.0;
    double r0 = 1.0;
    int m_log = 0;  // 1 + floor(log2(3 sqrt n))
    int radii_per_octave = 4;

    static CertificateParams defaults(std::size_t dimension);
    void validate(std::size_t dimension) const;
};

/// Atoms whose ball-mass ratio stays above 2^-j down from scale 2^-k:
/// mu(B(x,r)) >= 2^-j r at radii r = 2^-k * 2^(-i/radii_per_octave),
/// sampled down to the measure's resolution scale.
std::vector<std::uint32_t> extract_lower_regular(const DiscreteMeasure& mu, int j, int k,
                                                 int radii_per_octave = 4);

/// Smallest sampled radius used by extract_lower_regular for this measure.
double lower_regular_radius_floor(const DiscreteMeasure& mu, int k);

enum class CubeFamily { inactive, curve_dominated, measure_dominated };

struct CubeInfo {
    DyadicCube cube;
    double beta2_sq = 0.0;       // beta2^2(nu, 3Q)
    double beta_gamma_up = 0.0;  // conservative upper value of beta_Gamma(aQ)
    double mass_q = 0.0;         // nu(Q)
    double mass_eq = 0.0;        // nu(E n Q)
    CubeFamily family = CubeFamily::inactive;
};

struct CubePartition {
    std::vector<DyadicCube> inactive, curve_dominated, measure_dominated;
};

struct PartitionResult {
    CubePartition partition;
    std::vector<CubeInfo> info;      // every occupied cube, side <= r0
    double sampling_spacing = 0.0;   // polyline sampling step used for beta_Gamma
};

/// Splits every occupied cube of side <= r0 (down to `depth`) into the three
/// families by comparing eps * beta2(nu,3Q) against the conservative
/// beta_Gamma(aQ). E atoms must lie on the curve.
PartitionResult partition_cubes(const DiscreteMeasure& nu,
                                const std::vector<std::uint32_t>& e_atoms,
                                const PolyCurve& curve, const CertificateParams& params,
                                int depth);

struct CertificateReport {
    std::size_t dimension = 0;
    double a = 0.0, epsilon = 0.0, c_E = 0.0, r0 = 0.0;
    int depth = 0;

    double lhs_integral = 0.0;   // sum over E atoms of w * Jtilde(nu, r0, x)
    double lhs_by_cubes = 0.0;   // same quantity assembled cube by cube
    double term_I = 0.0;         // sum over curve-dominated cubes of beta2^2 diam Q
    double term_II = 0.0;        // sum over measure-dominated cubes of beta2^2 diam Q
    double bound_I = 0.0;        // eps^-2 sum over curve-dominated cubes of beta_Gamma^2 diam Q
    double bound_I_full = 0.0;   // eps^-2 truncated sum over all cubes meeting Gamma
    double bound_II = 0.0;       // (1600/3) 4^n sqrt(n)/c_E * nu(off curve)
    double nu_off_curve = 0.0;
    double curve_length = 0.0;

    bool hypothesis_ok = false;
    bool identity_ok = false;   // lhs_integral == lhs_by_cubes to 1e-12 rel
    bool term2_ok = false;      // term_II <= bound_II
    bool combined_ok = false;   // lhs <= bound_I_full + term_II
    std::string violation;      // first hypothesis violation, empty if none

    std::size_t count_inactive = 0, count_curve_dominated = 0, count_measure_dominated = 0;

    bool all_ok() const { return hypothesis_ok && identity_ok && term2_ok && combined_ok; }
    std::string to_text() const;  // key=value block
};

/// Full numeric certificate of the splitting estimate at one depth.
CertificateReport splitting_certificate(const DiscreteMeasure& nu,
                                     const std::vector<std::uint32_t>& e_atoms,
                                     const PolyCurve& curve, const CertificateParams& params,
                                     int depth);

struct TstResult {
    double total = 0.0;
    std::map<int, double> per_level;  // level -> subtotal
};

/// Truncated traveling-salesman sum of a finite point set:
/// sum over grid cubes (levels 0..depth) of beta_E(lambda Q)^2 diam Q.
TstResult tst_sum(const std::vector<std::vector<double>>& points, int depth,
                  double lambda = 3.0);

struct AncestorScalingCheck {
    bool containment_ok = true;
    double max_beta_violation = 0.0;  // max of beta_E(aQ) - (3*2^m/a) beta_E(3Q^m)
    std::size_t cubes_checked = 0;
};

/// Numeric check of the ancestor comparison: with a = 3 + 6 sqrt(n) and
/// m = ceil(log2 a), every cube meeting the set satisfies
/// aQ inside 3*ancestor and beta_E(aQ) <= (3*2^m/a) beta_E(3*ancestor).
AncestorScalingCheck ancestor_scaling_check(const std::vector<std::vector<double>>& points,
                                            int depth);

struct WhitneyClassCheck {
    bool ok = true;
    std::size_t pairs_checked = 0;
    int worst_margin = 0;  // min over pairs of k_class - k1(k0)
};

/// Verifies that every emitted Whitney cube carrying nu-mass inside 3Q of a
/// measure-dominated cube of side 2^-k0 has class k >= k0 - 1 - floor(log2(3 sqrt n)).
WhitneyClassCheck whitney_class_check(const DiscreteMeasure& nu,
                                        const PartitionResult& partition,
                                        const std::vector<WhitneyCube>& whitney);

}  // namespace betascope
