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

// JSON interchange for states, effects, maps and Kraus lists:
//
//   {"system": {"theory": "quantum", "dims": [2]}, "kind": "state", "data": [...]}
//
// States and effects store their real coordinates; "map" stores the D(B) x D(A)
// coordinate matrix row by row together with "output_system"; "kraus" stores a
// list of complex matrices with entries written as [re, im]. Doubles are printed
// in shortest round-trip form, so dump followed by parse is bit-exact.

#include <map>
#include <string>
#include <vector>

#include "purelab/theory.hpp"

namespace purelab {

enum class PayloadKind { State, Effect, Map, Kraus };

std::string to_string(PayloadKind kind);

struct Payload {
    PayloadKind kind = PayloadKind::State;
    SystemLabel system;         ///< the state's system, or the input of a map
    SystemLabel output_system;  ///< maps and Kraus lists only
    RVec coords;                ///< state / effect
    RMat matrix;                ///< map
    std::vector<CMat> kraus;    ///< Kraus list
    /// Extra top-level members, each holding serialized JSON text.
    std::map<std::string, std::string> metadata;
};

/// Parses a payload document; malformed input raises ContractViolation.
Payload parse_payload(const std::string &text);
std::string dump_payload(const Payload &p, int indent = -1);

Payload payload_of(const StateVec &s);
Payload payload_of(const EffectVec &a);
Payload payload_of(const LinearMap &m);
Payload kraus_payload(const SystemLabel &in, const SystemLabel &out, const std::vector<CMat> &kraus);

/// A payload as a map: states become preparations, effects observations, Kraus
/// lists channels (with the Kraus realisation attached).
LinearMap payload_to_map(const Payload &p, const TheoryModel &model);

Payload load_payload_file(const std::string &path);
void save_payload_file(const Payload &p, const std::string &path);

}  // namespace purelab
