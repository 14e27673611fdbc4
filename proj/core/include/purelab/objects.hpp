// Copyright 2026 The purelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "purelab/linalg.hpp"

namespace purelab {

enum class TheoryId { Classical, Quantum, RealQuantum };

std::string to_string(TheoryId id);
TheoryId theory_from_string(const std::string &name);

/// A typed wire: the owning theory, the ordered atomic factors (simplex sizes or
/// Hilbert dimensions) and the real coordinate dimension D = dim S_R.
struct SystemLabel {
    TheoryId theory = TheoryId::Quantum;
    std::vector<int> factors;
    int coord_dim = 1;

    bool is_trivial() const { return factors.empty(); }
    int hilbert_dim() const;
    std::string describe() const;
    friend bool operator==(const SystemLabel &, const SystemLabel &) = default;
};

struct StateVec {
    SystemLabel system;
    RVec coords;
};

struct EffectVec {
    SystemLabel system;
    RVec coords;
};

/// Pairing <a|rho>: the probability of the effect on the state.
double pair(const EffectVec &a, const StateVec &rho);

enum class MapTag { Unconstrained, Transformation, Channel, Reversible };

std::string to_string(MapTag tag);

/// A transformation in T(A, B) as a real D(B) x D(A) matrix on coordinates.
///
/// Matrix-backed models may also carry a Kraus realisation. It is required by the
/// real-quantum model for local actions on composites, where the coordinate matrix
/// alone does not fix the action on the extension.
struct LinearMap {
    SystemLabel input;
    SystemLabel output;
    RMat matrix;
    MapTag tag = MapTag::Unconstrained;
    std::optional<std::vector<CMat>> kraus;

    RVec operator()(const RVec &x) const { return matrix * x; }
};

}  // namespace purelab
