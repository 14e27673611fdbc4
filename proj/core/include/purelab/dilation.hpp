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

#include "purelab/circuit.hpp"
#include "purelab/theory.hpp"

namespace purelab {

/// A purification Psi on A (x) A~ of a normalized state rho on A.
struct Purification {
    StateVec original;
    StateVec pure;
    SystemLabel purifying;
    StateVec complementary;  ///< marginal of Psi on A~
    CVec psi;                ///< state vector; empty in the classical model
};

/// Purifies `rho`. Classical mixed states raise PurificationUnsupported.
Purification purify(const TheoryModel &model, const StateVec &rho, int pad_to = 0);

/// Observation-test {b_i} on A~ steering Psi into the ensemble: <b_i|_{A~} Psi = rho_i.
/// Outcomes are labelled "0", "1", ...
Test steering_test(const TheoryModel &model, const Purification &p, const std::vector<StateVec> &ensemble,
                   double tol = 1e-9);

/// Whether (A1 (x) I) Psi_rho = (A2 (x) I) Psi_rho for a purification of rho.
///
/// The classical model compares the maps on the support of rho directly. The
/// real-quantum model answers only when one of the maps is reversible (a single
/// Kraus operator) and throws Unsupported otherwise.
bool equal_upon_input(const TheoryModel &model, const LinearMap &a1, const LinearMap &a2, const StateVec &rho,
                      double tol = 1e-9);

/// Isometric dilation V: A -> B (x) E of a channel A -> B.
struct Dilation {
    LinearMap channel;
    SystemLabel environment;
    CMat isometry;
    LinearMap lift;  ///< V . V^dagger as a channel A -> B (x) E
    double isometry_residual = 0.0;  ///< max |V^dagger V - I|
};

/// Dilation from the Choi eigendecomposition; the environment has the Choi rank
/// unless `env_dim` asks for more.
Dilation stinespring(const TheoryModel &model, const LinearMap &channel, int env_dim = 0);
/// Dilation stacking the given Kraus operators, one environment level each.
Dilation dilation_from_kraus(const TheoryModel &model, const LinearMap &channel, const std::vector<CMat> &kraus);

/// Pure-ancilla and reversible form of a dilation: U (rho (x) phi0) U^dagger = V rho V^dagger.
/// The environment may be padded so the dimensions of A E0 and B E agree.
struct ReversibleForm {
    StateVec ancilla;   ///< phi0 on E0
    SystemLabel padded_environment;
    CMat unitary;       ///< A (x) E0 -> B (x) E
};
ReversibleForm reversible_form(const TheoryModel &model, const Dilation &d);

/// A channel Z: E1 -> E2 with V2 = (I (x) Z) V1.
struct Connection {
    CMat w;           ///< the operator part, V2 = (I (x) w) V1
    LinearMap map;    ///< Z as a channel, w completed on the null space of V1's environment
    double residual = 0.0;  ///< max |V2 - (I (x) w) V1|
};

/// Throws NotSameChannel when the reduced channels differ by more than `tol`.
Connection connect_dilations(const TheoryModel &model, const Dilation &d1, const Dilation &d2, double tol = 1e-8);

/// Channel A -> E keeping the environment of the minimal dilation.
LinearMap complementary_channel(const TheoryModel &model, const LinearMap &channel);
LinearMap complementary_channel(const TheoryModel &model, const Dilation &d);

/// A test realised as an isometry followed by a projective readout of the ancilla.
struct TestDilation {
    Dilation dilation;                 ///< of the coarse-grained channel
    std::vector<std::string> outcomes;
    std::vector<EffectVec> readout;    ///< orthogonal block projectors on E
};

TestDilation dilate_test(const TheoryModel &model, const Test &test);

}  // namespace purelab
