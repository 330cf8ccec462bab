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

#include "betascope/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "betascope/beta.hpp"
#include "betascope/certificates.hpp"
#include "betascope/curvature.hpp"
#include "betascope/error.hpp"
#include "betascope/generators.hpp"
#include "betascope/io.hpp"
#include "betascope/jones.hpp"
#include "betascope/whitney.hpp"

namespace betascope {

namespace fs = std::filesystem;

unsigned pick_thread_count(const AnalysisConfig& cfg) {
    if (const char* env = std::getenv("BETASCOPE_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const long v = cfg.get_int("run", "threads", 0);
    if (v >= 1) return static_cast<unsigned>(v);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

RecenterTransform recenter_transform(const DiscreteMeasure& mu) {
    RecenterTransform t;
    t.offset.assign(mu.dimension(), 0.0);
    std::vector<double> lo, hi;
    if (!mu.bounds(lo, hi)) return t;
    bool inside = true;
    for (std::size_t d = 0; d < mu.dimension(); ++d)
        if (lo[d] < 0.0 || hi[d] >= 1.0) inside = false;
    if (inside) return t;  // leave aligned data untouched
    double extent = 0.0;
    for (std::size_t d = 0; d < mu.dimension(); ++d) extent = std::max(extent, hi[d] - lo[d]);
    if (extent <= 0.0) extent = 1.0;
    t.identity = false;
    t.scale = 1.0 / (extent * (1.0 + 1e-9));
    t.offset = lo;
    return t;
}

DiscreteMeasure apply_recenter(const DiscreteMeasure& mu, const RecenterTransform& t) {
    if (t.identity) return mu;
    DiscreteMeasure out(mu.dimension());
    std::vector<double> p(mu.dimension());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d)
            p[d] = (mu.coord(d, i) - t.offset[d]) * t.scale;
        out.add(p, mu.weight(i));
    }
    out.set_resolution_scale(mu.resolution_scale() * t.scale);
    return out;
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << content;
    if (!os) throw IoError("write failed: " + path);
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] * (1.0 - frac) + v[i + 1] * frac : v[i];
}

PolyCurve builtin_or_file_curve(const AnalysisConfig& cfg, const std::string& section) {
    const std::string shape = cfg.get_string(section, "shape", "");
    if (shape.empty()) return read_curve_file(cfg.require_string(section, "curve"));
    if (shape == "staircase")
        return staircase_curve(static_cast<int>(cfg.get_int(section, "steps", 4)));
    if (shape == "random_staircase")
        return random_staircase(cfg.get_double(section, "length", 4.0),
                                static_cast<std::uint64_t>(cfg.get_int(section, "seed", 1)));
    if (shape == "serpentine")
        return serpentine_curve(static_cast<int>(cfg.get_int(section, "rows", 4)));
    if (shape == "lshape") return l_shape_curve();
    if (shape == "diagonal") return diagonal_curve();
    throw InputError("unknown curve shape: " + shape);
}

int cmd_generate(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const std::string kind = cfg.require_string("generate", "kind");
    const std::string out_measure =
        cfg.output_dir + "/" + cfg.get_string("generate", "out_measure", "measure.txt");
    std::vector<std::string> comments;
    DiscreteMeasure mu;
    if (kind == "cascade") {
        CascadeParams p;
        p.delta = cfg.get_double("generate", "delta", 0.05);
        p.gen_depth = static_cast<int>(cfg.get_int("generate", "K", 6));
        p.dimension = static_cast<int>(cfg.get_int("generate", "n", 2));
        mu = cascade_product(p);
        comments.push_back("generator: cascade delta=" + format_g17(p.delta) +
                           " K=" + std::to_string(p.gen_depth) +
                           " n=" + std::to_string(p.dimension));
    } else if (kind == "four_corner") {
        const int level = static_cast<int>(cfg.get_int("generate", "level", 5));
        mu = four_corner_cantor(level);
        comments.push_back("generator: four_corner level=" + std::to_string(level));
    } else if (kind == "lebesgue") {
        const int n = static_cast<int>(cfg.get_int("generate", "n", 2));
        const int level = static_cast<int>(cfg.get_int("generate", "level", 5));
        mu = lebesgue_box(n, level);
        comments.push_back("generator: lebesgue n=" + std::to_string(n) +
                           " level=" + std::to_string(level));
    } else if (kind == "curve") {
        const PolyCurve curve = builtin_or_file_curve(cfg, "generate");
        WeightProfile profile;
        const std::string prof = cfg.get_string("generate", "profile", "arclength");
        if (prof == "exponential") {
            profile.kind = WeightProfile::Kind::exponential;
            profile.rate = cfg.get_double("generate", "rate", 1.0);
        } else if (prof != "arclength") {
            throw InputError("unknown weight profile: " + prof);
        }
        const double apul = cfg.get_double("generate", "atoms_per_unit_length", 500.0);
        mu = curve_measure(curve, apul, profile);
        comments.push_back("generator: curve profile=" + prof +
                           " atoms_per_unit_length=" + format_g17(apul));
        write_curve_file(cfg.output_dir + "/" +
                             cfg.get_string("generate", "out_curve", "curve.txt"),
                         curve);
    } else {
        throw InputError("unknown generator kind: " + kind);
    }
    write_measure_file(out_measure, mu, comments);
    std::ostringstream sum;
    sum << "command = generate\nkind = " << kind << "\natoms = " << mu.size()
        << "\ntotal_mass = " << format_g17(mu.total_mass())
        << "\nresolution_scale = " << format_g17(mu.resolution_scale()) << "\n";
    write_text(cfg.output_dir + "/summary.txt", sum.str());
    return kExitOk;
}

struct CubeRow {
    int level;
    std::vector<std::int64_t> coords;
    double mass;
    double beta2;
    double beta_sup_v;  // negative when not computed
};

int cmd_analyze(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const std::string input = cfg.require_string("analyze", "input");
    DiscreteMeasure raw = read_measure_file(input);
    if (raw.empty()) throw InputError("analyze: input measure has no atoms");

    const bool recenter = cfg.get_bool("analyze", "recenter", true);
    RecenterTransform transform;
    if (recenter) transform = recenter_transform(raw);
    const DiscreteMeasure mu = apply_recenter(raw, transform);

    const double start_scale = cfg.get_double("analyze", "start_scale", 1.0);
    const int depth = static_cast<int>(cfg.get_int("analyze", "depth", 7));
    const int l0 = level_for_scale(start_scale);
    if (depth < l0) throw InputError("analyze: depth shallower than start_scale level");
    const bool with_betasup = cfg.get_bool("analyze", "betasup", mu.dimension() == 2);
    const auto variants = cfg.get_list("analyze", "variants", {"ordinary", "normalized"});
    const long profile_atoms = cfg.get_int("analyze", "profile_atoms", 100);
    const std::uint64_t profile_seed =
        static_cast<std::uint64_t>(cfg.get_int("analyze", "profile_seed", 1));
    const std::string sampling = cfg.get_string("analyze", "sample", "mass");
    const unsigned threads = pick_thread_count(cfg);

    const GridConvention conv{Closure::half_open, 0};
    AtomIndex index(mu, l0, depth, conv);
    BetaSqCache cache(mu, index);

    std::ostringstream summary;
    summary << "command = analyze\ninput = " << input << "\natoms = " << mu.size()
            << "\ndepth = " << depth << "\nstart_scale = " << format_g17(start_scale)
            << "\nthreads = " << threads << "\n";
    summary << "recentered = " << (transform.identity ? "no" : "yes") << "\n";
    if (!transform.identity) {
        summary << "recenter_scale = " << format_g17(transform.scale) << "\n";
        for (std::size_t d = 0; d < transform.offset.size(); ++d)
            summary << "recenter_offset_" << d << " = " << format_g17(transform.offset[d])
                    << "\n";
    }
    if (mu.resolution_scale() > 0.0 &&
        std::ldexp(1.0, -depth) < 4.0 * mu.resolution_scale())
        summary << "warning = depth descends below 4x the resolution scale ("
                << format_g17(mu.resolution_scale()) << ")\n";

    // Per-cube table.
    bool range_ok = true, dominance_ok = true, partition_ok = true;
    std::ostringstream cubes_csv;
    cubes_csv << "level";
    for (std::size_t d = 0; d < mu.dimension(); ++d) cubes_csv << ",c" << (d + 1);
    cubes_csv << ",mass,beta2,beta_sup\n";
    for (int l = l0; l <= depth; ++l) {
        std::vector<CoordsKey> cells;
        for (const auto& [key, atoms] : index.level(l)) cells.push_back(key);
        std::sort(cells.begin(), cells.end(),
                  [](const CoordsKey& a, const CoordsKey& b) { return a.c < b.c; });
        std::vector<CubeRow> rows(cells.size());
        double level_mass = 0.0;
        parallel_for(cells.size(), threads, [&](std::size_t i) {
            const DyadicCube q{l, cells[i].c, conv};
            const BetaResult b = beta2(mu, index, q, 3.0);
            CubeRow row{l, cells[i].c, 0.0, b.value, -1.0};
            row.mass = index.cell_mass(l, cells[i]);
            if (with_betasup) {
                const BetaResult bs = beta_sup_of_support(mu, dilate(q, 3.0));
                row.beta_sup_v = bs.value;
            }
            rows[i] = std::move(row);
        });
        std::vector<double> betas;
        for (const auto& row : rows) {
            level_mass += row.mass;
            betas.push_back(row.beta2);
            if (!(row.beta2 >= 0.0 && row.beta2 <= 1.0)) range_ok = false;
            if (with_betasup && row.beta2 > row.beta_sup_v + 1e-9) dominance_ok = false;
            cubes_csv << row.level;
            for (std::int64_t c : row.coords) cubes_csv << ',' << c;
            cubes_csv << ',' << format_g17(row.mass) << ',' << format_g17(row.beta2) << ','
                      << (row.beta_sup_v >= 0.0 ? format_g17(row.beta_sup_v) : "") << "\n";
        }
        if (std::abs(level_mass - mu.total_mass()) >
            1e-12 * std::max(1.0, mu.total_mass()))
            partition_ok = false;
        std::vector<double> sorted = betas;
        std::sort(sorted.begin(), sorted.end());
        summary << "level_" << l << "_cubes = " << cells.size() << "\n";
        if (!sorted.empty()) {
            summary << "level_" << l << "_beta2_min = " << format_g17(sorted.front()) << "\n";
            summary << "level_" << l << "_beta2_median = " << format_g17(median_of(betas))
                    << "\n";
            summary << "level_" << l << "_beta2_max = " << format_g17(sorted.back()) << "\n";
        }
    }
    write_text(cfg.output_dir + "/cubes.csv", cubes_csv.str());

    // Profiles over sampled atoms.
    std::vector<std::uint32_t> chosen;
    {
        std::mt19937_64 rng(profile_seed);
        const std::size_t want =
            std::min<std::size_t>(static_cast<std::size_t>(std::max(0L, profile_atoms)),
                                  mu.size());
        if (sampling == "uniform") {
            std::uniform_int_distribution<std::uint32_t> pick(
                0, static_cast<std::uint32_t>(mu.size() - 1));
            for (std::size_t i = 0; i < want; ++i) chosen.push_back(pick(rng));
        } else if (sampling == "mass") {
            std::vector<double> cdf(mu.size());
            double run = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i) {
                run += mu.weight(i);
                cdf[i] = run;
            }
            std::uniform_real_distribution<double> uni(0.0, run);
            for (std::size_t i = 0; i < want; ++i)
                chosen.push_back(static_cast<std::uint32_t>(
                    std::lower_bound(cdf.begin(), cdf.end(), uni(rng)) - cdf.begin()));
        } else {
            throw InputError("analyze: sample must be mass or uniform");
        }
    }

    bool density_cmp_ok = true;
    std::ostringstream profiles_csv;
    profiles_csv << "atom_index,variant,level,term,partial_sum\n";
    std::map<std::string, std::map<int, std::vector<double>>> increments;  // variant -> level
    LermanParams lerman;
    lerman.j0_star = static_cast<int>(cfg.get_int("analyze", "lerman_j0", 2));
    lerman.j1_star = static_cast<int>(cfg.get_int("analyze", "lerman_j1", 4));
    std::unique_ptr<ShiftedGrids> grids;
    const bool want_lerman =
        std::find(variants.begin(), variants.end(), "lerman") != variants.end();
    if (want_lerman)
        grids = std::make_unique<ShiftedGrids>(
            mu, std::max(l0 - lerman.j1_star, -kMaxLevel), depth);
    std::vector<double> x(mu.dimension());
    for (std::uint32_t atom : chosen) {
        for (std::size_t d = 0; d < mu.dimension(); ++d) x[d] = mu.coord(d, atom);
        for (const std::string& v : variants) {
            JonesProfile p;
            if (v == "ordinary")
                p = jones_ordinary(cache, x, start_scale, depth, atom);
            else if (v == "normalized")
                p = jones_normalized(cache, x, start_scale, depth, atom);
            else if (v == "lerman")
                p = jones_lerman(*grids, x, start_scale, depth, lerman, atom);
            else
                throw InputError("analyze: unknown variant " + v);
            for (std::size_t i = 0; i < p.per_level_terms.size(); ++i) {
                const auto& t = p.per_level_terms[i];
                profiles_csv << atom << ',' << v << ',' << t.level << ','
                             << format_g17(t.term) << ',' << format_g17(p.partial_sums[i])
                             << "\n";
            }
            for (int l = l0; l <= depth; ++l)
                increments[v][l].push_back(p.level_increment(l));
        }
        const DensityComparison oc = density_comparison_check(cache, x, start_scale, depth);
        if (!oc.ok_termwise || !oc.ok_total) density_cmp_ok = false;
    }
    write_text(cfg.output_dir + "/profiles.csv", profiles_csv.str());
    for (auto& [variant, by_level] : increments)
        for (auto& [lvl, vals] : by_level) {
            summary << "increments_" << variant << "_level_" << lvl << "_q25 = "
                    << format_g17(quantile_of(vals, 0.25)) << "\n";
            summary << "increments_" << variant << "_level_" << lvl << "_median = "
                    << format_g17(median_of(vals)) << "\n";
            summary << "increments_" << variant << "_level_" << lvl << "_q75 = "
                    << format_g17(quantile_of(vals, 0.75)) << "\n";
        }

    // Grid-translation sensitivity: totals of the normalized profile under
    // each {0,1/3} shift for the sampled atoms.
    if (cfg.get_bool("analyze", "grid_shift_experiment", false)) {
        for (std::uint32_t s = 0; s < (1u << mu.dimension()); ++s) {
            const GridConvention sconv{Closure::half_open, s};
            AtomIndex sindex(mu, l0, depth, sconv);
            BetaSqCache scache(mu, sindex);
            std::vector<double> totals;
            for (std::uint32_t atom : chosen) {
                for (std::size_t d = 0; d < mu.dimension(); ++d) x[d] = mu.coord(d, atom);
                totals.push_back(jones_normalized(scache, x, start_scale, depth, atom).total());
            }
            summary << "shift_" << s << "_normalized_total_median = "
                    << format_g17(median_of(totals)) << "\n";
        }
    }

    if (with_betasup)
        summary << "beta_sup_exactness = " << (mu.dimension() == 2 ? "exact" : "heuristic")
                << "\n";
    summary << "check_beta_range = " << (range_ok ? "pass" : "fail") << "\n";
    summary << "check_dominance = "
            << (with_betasup ? (dominance_ok ? "pass" : "fail") : "skipped") << "\n";
    summary << "check_partition = " << (partition_ok ? "pass" : "fail") << "\n";
    summary << "check_density_comparison = " << (density_cmp_ok ? "pass" : "fail") << "\n";
    write_text(cfg.output_dir + "/summary.txt", summary.str());
    const bool all_ok = range_ok && (!with_betasup || dominance_ok) && partition_ok && density_cmp_ok;
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_certify(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const DiscreteMeasure nu = read_measure_file(cfg.require_string("certify", "measure"));
    const PolyCurve curve = builtin_or_file_curve(cfg, "certify");
    const int j = static_cast<int>(cfg.get_int("certify", "j", 6));
    const int k = static_cast<int>(cfg.get_int("certify", "k", 0));
    const int depth = static_cast<int>(cfg.get_int("certify", "depth", 8));
    CertificateParams params = CertificateParams::defaults(nu.dimension());
    params.r0 = std::ldexp(1.0, -k);
    params.radii_per_octave = static_cast<int>(cfg.get_int("certify", "radii_per_octave", 4));
    if (cfg.has("certify", "a")) params.a = cfg.get_double("certify", "a", params.a);
    if (cfg.has("certify", "epsilon"))
        params.epsilon = cfg.get_double("certify", "epsilon", params.epsilon);
    if (cfg.has("certify", "c_E")) params.c_E = cfg.get_double("certify", "c_E", 0.0);

    const std::vector<std::uint32_t> e_atoms =
        extract_lower_regular(nu, j, k, params.radii_per_octave);
    if (e_atoms.empty()) throw InputError("certify: extract_lower_regular selected no atoms");
    const CertificateReport rep = splitting_certificate(nu, e_atoms, curve, params, depth);

    std::string text = rep.to_text();
    bool whitney_ok = true;
    if (cfg.get_bool("certify", "whitney_check", true)) {
        const int wl = static_cast<int>(cfg.get_int("certify", "whitney_level", depth));
        std::vector<double> lo, hi;
        nu.bounds(lo, hi);
        Box domain;
        domain.center.resize(nu.dimension());
        domain.half_sides.resize(nu.dimension());
        for (std::size_t d = 0; d < nu.dimension(); ++d) {
            domain.center[d] = 0.5 * (lo[d] + hi[d]);
            domain.half_sides[d] = 0.6 * std::max(1e-6, hi[d] - lo[d]);
        }
        const WhitneyDecomposition wd = whitney_decompose(curve, domain, wl);
        CertificateParams pc = params;
        pc.c_E = rep.c_E;
        const PartitionResult part = partition_cubes(nu, e_atoms, curve, pc, depth);
        const WhitneyClassCheck wc = whitney_class_check(nu, part, wd.cubes);
        whitney_ok = wc.ok;
        std::ostringstream extra;
        extra << "whitney_cubes = " << wd.cubes.size() << "\n"
              << "whitney_unresolved_volume = " << format_g17(wd.unresolved_volume) << "\n"
              << "whitney_class_pairs = " << wc.pairs_checked << "\n"
              << "whitney_class_ok = " << (wc.ok ? "pass" : "fail") << "\n";
        text += extra.str();
    }
    write_text(cfg.output_dir + "/certificate.txt", text);
    write_text(cfg.output_dir + "/summary.txt", "command = certify\n" + text);
    return rep.all_ok() && whitney_ok ? kExitOk : kExitCheckFailed;
}

int cmd_whitney(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const PolyCurve curve = builtin_or_file_curve(cfg, "whitney");
    const int max_level = static_cast<int>(cfg.get_int("whitney", "max_level", 8));
    Box domain;
    const std::string dom = cfg.get_string("whitney", "domain", "unit");
    const std::size_t n = curve.dimension();
    domain.center.assign(n, 0.5);
    domain.half_sides.assign(n, 0.5);
    if (dom == "auto") {
        std::vector<double> lo, hi;
        curve.bounds(lo, hi);
        for (std::size_t d = 0; d < n; ++d) {
            domain.center[d] = 0.5 * (lo[d] + hi[d]);
            domain.half_sides[d] = 0.6 * std::max(1e-6, hi[d] - lo[d]);
        }
    } else if (dom != "unit") {
        throw InputError("whitney: domain must be unit or auto");
    }
    const WhitneyDecomposition wd = whitney_decompose(curve, domain, max_level);

    std::ostringstream csv;
    csv << "level";
    for (std::size_t d = 0; d < n; ++d) csv << ",c" << (d + 1);
    csv << ",dist,k_class\n";
    bool inequalities_ok = true;
    for (const WhitneyCube& t : wd.cubes) {
        const double diam = t.cube.diam();
        if (!(t.dist_to_curve <= diam && diam <= 4.0 * t.dist_to_curve))
            inequalities_ok = false;
        csv << t.cube.level;
        for (std::int64_t c : t.cube.coords) csv << ',' << c;
        csv << ',' << format_g17(t.dist_to_curve) << ',' << t.k_class << "\n";
    }
    write_text(cfg.output_dir + "/whitney.csv", csv.str());

    std::ostringstream sum;
    sum << "command = whitney\nmax_level = " << max_level << "\ncubes = " << wd.cubes.size()
        << "\nunresolved = " << wd.unresolved.size()
        << "\nunresolved_volume = " << format_g17(wd.unresolved_volume) << "\n";
    for (const auto& [k, members] : classify_Tk(wd.cubes))
        sum << "class_k_" << k << " = " << members.size() << "\n";
    sum << "check_inequalities = " << (inequalities_ok ? "pass" : "fail") << "\n";
    write_text(cfg.output_dir + "/summary.txt", sum.str());
    return inequalities_ok ? kExitOk : kExitCheckFailed;
}

int cmd_curvature(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const DiscreteMeasure mu = read_measure_file(cfg.require_string("curvature", "input"));
    const std::string mode = cfg.get_string("curvature", "mode", "exact");
    CurvatureEnergy e;
    if (mode == "exact") {
        e = leger_energy(mu, EnergyMode::exact);
    } else if (mode == "monte_carlo") {
        e = leger_energy(mu, EnergyMode::monte_carlo,
                         cfg.get_int("curvature", "samples", 100000),
                         static_cast<std::uint64_t>(cfg.get_int("curvature", "seed", 17)));
    } else {
        throw InputError("curvature: mode must be exact or monte_carlo");
    }
    std::ostringstream sum;
    sum << "command = curvature\nmode = " << mode << "\natoms = " << mu.size()
        << "\nenergy = " << format_g17(e.value) << "\nstd_error = " << format_g17(e.std_error)
        << "\nsamples = " << e.sample_count << "\n";
    write_text(cfg.output_dir + "/summary.txt", sum.str());
    return kExitOk;
}

int cmd_report(const AnalysisConfig& cfg) {
    ensure_dir(cfg.output_dir);
    const std::string in_dir = cfg.require_string("report", "input_dir");
    std::ifstream cubes(in_dir + "/cubes.csv");
    if (!cubes) throw IoError("report: cannot open " + in_dir + "/cubes.csv");
    std::string header;
    std::getline(cubes, header);
    std::map<int, std::vector<double>> betas_by_level;
    std::string line;
    while (std::getline(cubes, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.size() < 3) throw InputError("report: malformed cubes.csv row");
        betas_by_level[std::stoi(fields[0])].push_back(std::stod(fields[fields.size() - 2]));
    }
    std::ostringstream rep;
    rep << "command = report\nsource = " << in_dir << "\n";
    for (auto& [lvl, betas] : betas_by_level) {
        std::vector<double> sorted = betas;
        std::sort(sorted.begin(), sorted.end());
        rep << "level_" << lvl << "_cubes = " << betas.size() << "\n";
        rep << "level_" << lvl << "_beta2_min = " << format_g17(sorted.front()) << "\n";
        rep << "level_" << lvl << "_beta2_median = " << format_g17(median_of(betas)) << "\n";
        rep << "level_" << lvl << "_beta2_max = " << format_g17(sorted.back()) << "\n";
    }
    std::ifstream profiles(in_dir + "/profiles.csv");
    if (profiles) {
        std::getline(profiles, header);
        std::map<std::string, double> totals;
        std::map<std::string, std::map<long, double>> last_partial;
        while (std::getline(profiles, line)) {
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::istringstream ls(line);
            std::string f;
            while (std::getline(ls, f, ',')) fields.push_back(f);
            if (fields.size() != 5) throw InputError("report: malformed profiles.csv row");
            last_partial[fields[1]][std::stol(fields[0])] = std::stod(fields[4]);
        }
        for (const auto& [variant, by_atom] : last_partial) {
            std::vector<double> tot;
            for (const auto& [atom, total] : by_atom) tot.push_back(total);
            rep << "profiles_" << variant << "_median_total = " << format_g17(median_of(tot))
                << "\n";
        }
    }
    write_text(cfg.output_dir + "/report.txt", rep.str());
    return kExitOk;
}

}  // namespace

int run(const AnalysisConfig& cfg) {
    switch (cfg.command) {
        case Command::generate: return cmd_generate(cfg);
        case Command::analyze: return cmd_analyze(cfg);
        case Command::certify: return cmd_certify(cfg);
        case Command::whitney: return cmd_whitney(cfg);
        case Command::curvature: return cmd_curvature(cfg);
        case Command::report: return cmd_report(cfg);
    }
    throw InputError("unhandled command");
}

}  // namespace betascope
