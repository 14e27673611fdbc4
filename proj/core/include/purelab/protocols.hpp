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

#include "purelab/choi.hpp"
#include "purelab/theory.hpp"

namespace purelab {

/// Swapping effect for a pure bipartite state Psi on A (x) B.
struct SwapResult {
    EffectVec effect;          ///< rank one, on B (x) A (the inner wires of Psi (x) Psi)
    double probability = 0.0;  ///< 1 / sum_i (1 / lambda_i) over the Schmidt coefficients
    double residual = 0.0;     ///< max |<E| (Psi (x) Psi) - p Psi|
};

/// `split` is the number of leading factors of Psi forming A. Mixed input raises
/// ContractViolation.
SwapResult entanglement_swap(const TheoryModel &model, const StateVec &psi, int split = 1);

/// U^T on A~ with (U (x) I) Psi = (I (x) U^T) Psi for the faithful pair.
LinearMap transpose_reversible(const TheoryModel &model, const LinearMap &u, const FaithfulPair &fp);
/// U* = (U^T)^-1, so that (U (x) U*) Psi = Psi.
LinearMap conjugate_reversible(const TheoryModel &model, const LinearMap &u, const FaithfulPair &fp);
/// Inverse of a reversible map; raises ContractViolation for anything else.
LinearMap inverse_reversible(const TheoryModel &model, const LinearMap &u);

/// A finite twirling test {p_i U_i}.
struct TwirlTest {
    SystemLabel system;
    std::vector<double> probabilities;
    std::vector<CMat> operators;       ///< W_i = X^a Z^b, index i = a d + b
    std::vector<LinearMap> unitaries;  ///< rho -> W_i rho W_i^dagger; entry 0 is the identity
    LinearMap channel;                 ///< sum_i p_i U_i
    double residual = 0.0;             ///< max |T - |chi><e||
};

/// Weyl twirl on a quantum system of dimension d >= 2.
TwirlTest pauli_twirl(const TheoryModel &model, const SystemLabel &a);

/// Bell-basis teleportation from A' to A through the faithful state on A (x) A~.
struct TeleportationRun {
    FaithfulPair pair;
    TwirlTest twirl;
    std::vector<EffectVec> effects;       ///< B_i on A~ (x) A'
    std::vector<LinearMap> corrections;   ///< U_i^-1
    std::vector<double> probabilities;    ///< p_i
    std::vector<double> residuals;        ///< max |U_i^-1 A_i / p_i - I|
    bool effects_atomic = false;
    double normalization_residual = 0.0;  ///< max |sum_i B_i - e|
    double marginal_residual = 0.0;       ///< max |<B_i|(chi (x) .) - p_i e|
    double twirl_residual = 0.0;          ///< max |sum_i p_i U_i - T|
};

TeleportationRun deterministic_teleport(const TheoryModel &model, const SystemLabel &a);

/// The uncorrected branch A_i: A' -> A, rho -> <B_i|_{A~ A'} (Psi (x) rho).
LinearMap teleport_branch(const TheoryModel &model, const TeleportationRun &run, int outcome);
/// max |C A_i / p_i - I| for an arbitrary correction C.
double teleport_residual(const TheoryModel &model, const TeleportationRun &run, int outcome,
                         const LinearMap &correction);
/// <check| U_i^-1 A_i (input)>: joint probability of outcome i and the check.
double teleport_probability(const TheoryModel &model, const TeleportationRun &run, int outcome,
                            const StateVec &input, const EffectVec &check);
/// G_ij = <M_i | (U_j (x) I) Psi> with M_i the projector on (U_i (x) I) Psi.
RMat dense_coding_gram(const TheoryModel &model, const TeleportationRun &run);

/// Retriever R: A (x) P -> A meant to give R(rho (x) eta_i) = U_i rho U_i^dagger.
struct ProgrammingReport {
    bool orthogonal = false;  ///< programs pairwise orthogonal
    bool exact = false;       ///< every program retrieves its unitary within 1e-10
    double residual = 0.0;    ///< max_i |Choi(R(. (x) eta_i)) - Choi(U_i)|
    double deficit = 0.0;     ///< 1 - mean entanglement fidelity
    std::vector<double> fidelities;
    int restarts = 0;         ///< searches run (0 for the controlled construction)
    LinearMap retriever;
};

/// Controlled-unitary retriever for orthogonal programs; otherwise the best
/// retriever found by an iterative fidelity ascent with `restarts` random starts.
ProgrammingReport programming_demo(const std::vector<CMat> &unitaries, const std::vector<CVec> &programs, Rng &rng,
                                   int restarts = 50);

}  // namespace purelab
