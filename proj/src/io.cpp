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

#include "betascope/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "betascope/error.hpp"

namespace betascope {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct ParsedPoints {
    std::size_t dim = 0;
    std::vector<std::vector<double>> rows;
    double resolution_scale = 0.0;
};

ParsedPoints parse_points(std::istream& is, std::size_t extra_cols, const char* what) {
    ParsedPoints out;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            // Provenance comments may carry the resolution scale.
            std::istringstream cs(line.substr(start + 1));
            std::string key, eq;
            double v;
            if (cs >> key >> eq >> v && key == "resolution_scale" && eq == "=")
                out.resolution_scale = v;
            continue;
        }
        if (!header_seen) {
            std::size_t pos = line.find("n=");
            if (pos == std::string::npos)
                throw InputError(std::string(what) + ": expected header line n=<dim>");
            out.dim = static_cast<std::size_t>(std::stoul(line.substr(pos + 2)));
            if (out.dim == 0) throw InputError(std::string(what) + ": dimension must be >= 1");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (row.size() != out.dim + extra_cols)
            throw InputError(std::string(what) + ": line " + std::to_string(lineno) +
                             " has " + std::to_string(row.size()) + " fields, expected " +
                             std::to_string(out.dim + extra_cols));
        out.rows.push_back(std::move(row));
    }
    if (!header_seen) throw InputError(std::string(what) + ": missing header line n=<dim>");
    return out;
}

}  // namespace

void write_measure(std::ostream& os, const DiscreteMeasure& mu,
                   const std::vector<std::string>& comments) {
    os << "# betascope measure v1\n";
    for (const auto& c : comments) os << "# " << c << "\n";
    if (mu.resolution_scale() > 0.0)
        os << "# resolution_scale = " << format_g17(mu.resolution_scale()) << "\n";
    os << "n=" << mu.dimension() << "\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t d = 0; d < mu.dimension(); ++d)
            os << format_g17(mu.coord(d, i)) << ' ';
        os << format_g17(mu.weight(i)) << "\n";
    }
}

void write_measure_file(const std::string& path, const DiscreteMeasure& mu,
                        const std::vector<std::string>& comments) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_measure(os, mu, comments);
    if (!os) throw IoError("write failed: " + path);
}

DiscreteMeasure read_measure(std::istream& is) {
    const ParsedPoints pp = parse_points(is, 1, "measure file");
    DiscreteMeasure mu(pp.dim);
    for (const auto& row : pp.rows) {
        const double w = row.back();
        if (!(w >= 0.0)) throw InputError("measure file: negative weight");
        mu.add(std::span<const double>(row.data(), pp.dim), w);
    }
    mu.set_resolution_scale(pp.resolution_scale);
    return mu;
}

DiscreteMeasure read_measure_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open measure file: " + path);
    return read_measure(is);
}

void write_curve(std::ostream& os, const PolyCurve& curve,
                 const std::vector<std::string>& comments) {
    os << "# betascope curve v1\n";
    for (const auto& c : comments) os << "# " << c << "\n";
    os << "# length = " << format_g17(curve.length()) << "\n";
    os << "n=" << curve.dimension() << "\n";
    for (const auto& v : curve.vertices()) {
        for (std::size_t d = 0; d < curve.dimension(); ++d) {
            if (d) os << ' ';
            os << format_g17(v[d]);
        }
        os << "\n";
    }
}

void write_curve_file(const std::string& path, const PolyCurve& curve,
                      const std::vector<std::string>& comments) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_curve(os, curve, comments);
    if (!os) throw IoError("write failed: " + path);
}

PolyCurve read_curve(std::istream& is) {
    ParsedPoints pp = parse_points(is, 0, "curve file");
    return PolyCurve::from_vertices(std::move(pp.rows));
}

PolyCurve read_curve_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open curve file: " + path);
    return read_curve(is);
}

}  // namespace betascope
