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

#include "purelab/objects.hpp"

#include <sstream>

#include "purelab/errors.hpp"

namespace purelab {

std::string to_string(TheoryId id) {
    switch (id) {
        case TheoryId::Classical:
            return "classical";
        case TheoryId::Quantum:
            return "quantum";
        case TheoryId::RealQuantum:
            return "real-quantum";
    }
    return "unknown";
}

TheoryId theory_from_string(const std::string &name) {
    if (name == "classical") return TheoryId::Classical;
    if (name == "quantum") return TheoryId::Quantum;
    if (name == "real-quantum") return TheoryId::RealQuantum;
    throw ContractViolation("unknown theory '" + name + "'");
}

std::string to_string(MapTag tag) {
    switch (tag) {
        case MapTag::Unconstrained:
            return "unconstrained";
        case MapTag::Transformation:
            return "transformation";
        case MapTag::Channel:
            return "channel";
        case MapTag::Reversible:
            return "reversible";
    }
    return "unknown";
}

int SystemLabel::hilbert_dim() const {
    int d = 1;
    for (int f : factors) d *= f;
    return d;
}

std::string SystemLabel::describe() const {
    std::ostringstream out;
    out << to_string(theory) << "[";
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out << "x";
        out << factors[i];
    }
    out << "] D=" << coord_dim;
    return out.str();
}

double pair(const EffectVec &a, const StateVec &rho) {
    if (a.system != rho.system) throw ContractViolation("pair: effect and state live on different systems");
    return a.coords.dot(rho.coords);
}

}  // namespace purelab
