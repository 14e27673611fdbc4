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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "purelab/theory.hpp"

namespace purelab {

enum class Verdict { Holds, Fails, Unsupported };

std::string to_string(Verdict v);

/// Outcome of one axiom check with the numbers needed to re-verify it.
struct CheckResult {
    std::string id;
    Verdict verdict = Verdict::Unsupported;
    std::string label;  ///< "holds", "fails", "cloneable", ...
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> notes;
};

struct AxiomReport {
    TheoryId theory = TheoryId::Quantum;
    std::vector<int> dims;
    uint64_t seed = 0;
    int samples = 50;
    std::vector<CheckResult> checks;  ///< sorted by id

    const CheckResult &check(const std::string &id) const;
};

/// <e', rho_k> = 1 on a spanning set has the single solution e'.
CheckResult check_causality(const TheoryModel &model, const SystemLabel &a);
/// D(AB) = D(A) D(B).
CheckResult check_local_discriminability(const TheoryModel &model, const SystemLabel &a, const SystemLabel &b);
/// Purifies random mixed states and connects two independent purifications by a
/// reversible map. Classical systems fail structurally.
CheckResult check_purification(const TheoryModel &model, const SystemLabel &a, int samples, Rng &rng);
/// No-cloning via distinguishability of a spanning set of pure states.
CheckResult check_no_cloning(const TheoryModel &model, const SystemLabel &a);
CheckResult check_no_cloning(const TheoryModel &model, const SystemLabel &a, const std::vector<StateVec> &states);
/// Greedy search for perfectly distinguishable pure states; holds iff fewer than D(A).
CheckResult check_max_distinguishable(const TheoryModel &model, const SystemLabel &a, int budget, Rng &rng);
/// Every branch of an instrument summing to the identity is a multiple of it. Throws
/// DisturbingInstrument when the branches do not sum to the identity.
CheckResult check_no_info_without_disturbance(const TheoryModel &model, const SystemLabel &a,
                                              const std::vector<LinearMap> &instrument);

/// Runs every check on atoms of dimension dims[0] (and dims[1] for the second factor).
AxiomReport run_battery(TheoryId theory, const std::vector<int> &dims, uint64_t seed = 0, int samples = 50);
std::vector<AxiomReport> run_battery(const std::vector<TheoryId> &theories, const std::vector<int> &dims,
                                     uint64_t seed = 0, int samples = 50);

std::string report_json(const std::vector<AxiomReport> &reports);
std::string report_markdown(const std::vector<AxiomReport> &reports);

}  // namespace purelab
