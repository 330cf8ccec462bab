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

#include <stdexcept>
#include <string>

namespace betascope {

/// Invalid caller-supplied data: dimension mismatch, out-of-range parameter,
/// malformed file content.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation was asked to operate on degenerate data it cannot handle
/// (e.g. fitting a line to a region with zero mass).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation refused to run because its input exceeds a documented size
/// limit (brute-force oracles, exact triple sums, product generators).
class CostGuardError : public std::runtime_error {
public:
    explicit CostGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure while reading or writing artifacts.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace betascope
