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
#include <functional>
#include <string>

#include "betascope/config.hpp"
#include "betascope/measure.hpp"

namespace betascope {

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitCostGuard = 4;
inline constexpr int kExitCheckFailed = 5;
inline constexpr int kExitInternal = 6;

/// Worker count: BETASCOPE_THREADS overrides [run] threads overrides
/// hardware concurrency.
unsigned pick_thread_count(const AnalysisConfig& cfg);

/// Deterministic parallel map: fn(i) for i in [0, count), results must be
/// written into caller-owned per-index slots.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

/// Rescale/translate into [0,1)^n when the data is not already inside.
struct RecenterTransform {
    std::vector<double> offset;
    double scale = 1.0;
    bool identity = true;
};
RecenterTransform recenter_transform(const DiscreteMeasure& mu);
DiscreteMeasure apply_recenter(const DiscreteMeasure& mu, const RecenterTransform& t);

/// Executes one configured command, writing its report files under
/// cfg.output_dir. Returns a process exit code (checks that fail yield
/// kExitCheckFailed); input problems raise the error types from
/// error.hpp, which the CLI maps to exit codes.
int run(const AnalysisConfig& cfg);

}  // namespace betascope
