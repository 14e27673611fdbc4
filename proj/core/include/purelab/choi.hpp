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

#include <vector>

#include "purelab/serialize.hpp"
#include "purelab/theory.hpp"

namespace purelab {

/// Canonical dynamically faithful pure state of a system and its teleportation effect.
struct FaithfulPair {
    SystemLabel system;     ///< A
    SystemLabel purifying;  ///< A~, a copy of A
    StateVec psi;           ///< maximally entangled, on A (x) A~
    EffectVec effect;       ///< projector onto the same vector, on A~ (x) A
    double probability = 0.0;  ///< <E| (Psi (x) I) = probability * identity
};

/// Maximally entangled state of A with a copy of itself. Classical systems have
/// no faithful pure state and raise Unsupported.
FaithfulPair faithful_pair(const TheoryModel &model, const SystemLabel &a);

/// The Choi state R_C = (C (x) I) Psi on B (x) A~ of a map C: A -> B.
struct ChoiState {
    StateVec state;
    SystemLabel input;   ///< A
    SystemLabel output;  ///< B
    RVec marginal;       ///< <e_B| R_C, on A~
};

ChoiState store(const TheoryModel &model, const LinearMap &c, const FaithfulPair &fp);

/// Wraps a bipartite state on B (x) A~ as a Choi state; no physicality check.
ChoiState as_choi_state(const TheoryModel &model, const StateVec &r, const FaithfulPair &fp);

/// C(rho) = <E|_{A~ A} (R (x) rho) / p. Throws NotAChoiState when R is not a state or
/// its marginal on A~ exceeds the marginal of Psi. The result is tagged Channel when
/// the marginals agree and carries Kraus operators.
LinearMap retrieve(const TheoryModel &model, const ChoiState &r, const FaithfulPair &fp, double tol = 1e-9);

/// max |sum_i <e_B|R_i - <e_A|Psi|| for a family of Choi states; zero iff the
/// retrieved family is a normalized test.
double instrument_residual(const TheoryModel &model, const std::vector<ChoiState> &family, const FaithfulPair &fp);

/// Contracts factor pairs of two vectors with rescaled teleportation effects:
/// factor `pairs[k].first` of r1 against `pairs[k].second` of r2. The result lists the
/// remaining factors of r2, then the remaining factors of r1. Without pairs it is r2 (x) r1.
StateVec link(const TheoryModel &model, const StateVec &r1, const StateVec &r2,
              const std::vector<std::pair<int, int>> &pairs);

/// R_{D o C} from R_C and R_D.
ChoiState link(const TheoryModel &model, const ChoiState &rc, const ChoiState &rd);

enum class EbMethod { Ppt, MeasurePrepareWitness };
enum class EbVerdict { EntanglementBreaking, NotEntanglementBreaking, Inconclusive };

std::string to_string(EbVerdict v);

struct EbResult {
    EbVerdict verdict = EbVerdict::Inconclusive;
    double min_partial_transpose_eigenvalue = 0.0;  ///< Ppt only
    /// Witness form C(rho) = sum_i <povm_i, rho> states_i (MeasurePrepareWitness only).
    std::vector<EffectVec> povm;
    std::vector<StateVec> states;
};

/// PPT decides exactly when dim(A) dim(B) <= 6 and reports a violation as not
/// entanglement breaking elsewhere. The witness succeeds when the Choi operator is
/// diagonal in the product of the marginal eigenbases.
EbResult is_entanglement_breaking(const TheoryModel &model, const LinearMap &c, EbMethod method = EbMethod::Ppt);

/// The channel rho -> sum_i <a_i, rho> sigma_i.
LinearMap measure_and_prepare(const TheoryModel &model, const std::vector<EffectVec> &povm,
                              const std::vector<StateVec> &states);

struct CausalOrder {
    bool ordered = false;
    double residual = 0.0;  ///< max |<e_{B2}| C - D (x) <e_{A2}||
    LinearMap reduced;      ///< D: A1 -> B1
};

/// Splits input and output after `in_split` / `out_split` factors and checks that
/// discarding B2 leaves a map that ignores A2.
CausalOrder check_causal_order(const TheoryModel &model, const LinearMap &c, int in_split, int out_split,
                               double tol = 1e-9);

/// Sequence of channels with memory: step k maps M_{k-1} (x) A_k -> B_k (x) M_k, with
/// M_0 and the last memory trivial.
struct CombDecomposition {
    std::vector<LinearMap> steps;
    std::vector<int> memory_dims;  ///< M_1 ... M_{N-1}
    double residual = 0.0;         ///< max |Choi(recomposed) - Choi(C)|
};

/// Decomposes a causally ordered channel whose k-th part has `in_parts[k]` input
/// and `out_parts[k]` output factors. Violations raise CausalOrderViolation naming the cut.
CombDecomposition comb_decompose(const TheoryModel &model, const LinearMap &c, const std::vector<int> &in_parts,
                                 const std::vector<int> &out_parts, double tol = 1e-9);

/// A random causally ordered channel A1 A2 -> B1 B2 on d-level wires: a channel
/// A1 -> B1 M followed by M A2 -> B2, with M of dimension `memory`.
LinearMap random_two_step_comb(const TheoryModel &model, int d, int memory, Rng &rng);

/// Recomposes the steps into one channel A_1..A_N -> B_1..B_N.
LinearMap recompose(const TheoryModel &model, const CombDecomposition &comb);

/// JSON payload of a Choi state with a "faithful_pair" metadata block.
Payload choi_payload(const ChoiState &r, const FaithfulPair &fp);

}  // namespace purelab
