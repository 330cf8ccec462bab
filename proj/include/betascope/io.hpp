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

#include <iosfwd>
#include <string>
#include <vector>

#include "betascope/measure.hpp"
#include "betascope/whitney.hpp"

namespace betascope {

/// 17-significant-digit decimal form (round-trips binary doubles exactly).
std::string format_g17(double v);

// Measure file format (text): optional `#` comment lines, a header line
// `n=<dim>`, then one atom per line as `x1 x2 ... xn w` separated by
// single spaces. Writers emit 17 significant digits. A comment of the form
// `# resolution_scale = <v>` round-trips the generator's finest scale.

void write_measure(std::ostream& os, const DiscreteMeasure& mu,
                   const std::vector<std::string>& comments = {});
void write_measure_file(const std::string& path, const DiscreteMeasure& mu,
                        const std::vector<std::string>& comments = {});
DiscreteMeasure read_measure(std::istream& is);
DiscreteMeasure read_measure_file(const std::string& path);

// Curve files share the layout: `n=<dim>` then one vertex per line.

void write_curve(std::ostream& os, const PolyCurve& curve,
                 const std::vector<std::string>& comments = {});
void write_curve_file(const std::string& path, const PolyCurve& curve,
                      const std::vector<std::string>& comments = {});
PolyCurve read_curve(std::istream& is);
PolyCurve read_curve_file(const std::string& path);

}  // namespace betascope
