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

#include <cstdlib>
#include <string>

#include "betascope/error.hpp"
#include "betascope/kernels.hpp"

namespace betascope::kern {

namespace {
const KernelOps& select() {
    const char* env = std::getenv("BETASCOPE_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return scalar_ops();
    if (mode == "avx2") {
        const KernelOps* v = avx2_ops();
        if (!v) throw InputError("BETASCOPE_SIMD=avx2 requested but AVX2 is unavailable");
        return *v;
    }
    if (mode != "auto" && !mode.empty())
        throw InputError("unknown BETASCOPE_SIMD value: " + mode);
    const KernelOps* v = avx2_ops();
    return v ? *v : scalar_ops();
}
}  // namespace

const KernelOps& ops() {
    static const KernelOps& chosen = select();
    return chosen;
}

}  // namespace betascope::kern
