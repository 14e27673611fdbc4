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
#include <utility>
#include <vector>

#include "purelab/theory.hpp"

namespace purelab {

/// A channel together with the input state it should be corrected on. In the
/// Hilbert models the code is the support projector of rho.
struct CodeSpec {
    StateVec rho;
    CMat projector;
    LinearMap channel;
    std::vector<CMat> kraus;
};

/// Builds a spec from a state; the channel's Kraus operators are taken from the map
/// or from its Choi operator.
CodeSpec code_for_state(const TheoryModel &model, const LinearMap &channel, const StateVec &rho);
/// Builds a spec from a code projector (rho = P / tr P). Raises ContractViolation
/// unless P is an orthogonal projector and every Kraus operator maps A to B.
CodeSpec code_for_projector(const TheoryModel &model, const LinearMap &channel, const CMat &projector);

struct CorrectionResult {
    bool correctable = false;
    CMat kl_matrix;                  ///< lambda_ij = tr(P K_i^dagger K_j P) / tr P
    double kl_residual = 0.0;        ///< max_ij |P K_i^dagger K_j P - lambda_ij P|
    std::pair<int, int> witness{-1, -1};  ///< worst (i, j) block
    std::optional<LinearMap> recovery;
    bool recovers_upon_input = false;     ///< R o C equals the identity upon input of rho
    double end_to_end_residual = 0.0;     ///< max |(R o C (x) I) Psi - Psi|
    bool factorized = false;
    double factorization_residual = 0.0;  ///< max |rho_ER - sigma_E (x) rho_R|
};

/// Knill-Laflamme test with the standard recovery. The reference/environment
/// factorization is evaluated independently of the outcome.
CorrectionResult is_correctable(const TheoryModel &model, const CodeSpec &spec, double tol = 1e-8);

struct DeletionResult {
    bool deletion = false;
    StateVec sigma;         ///< C(rho) / tr C(rho)
    double residual = 0.0;  ///< max |C(tau) - <e, tau> sigma| over the refinement span of rho
};

/// Whether C sends every state in the refinement span of rho to one fixed state.
DeletionResult is_deletion(const TheoryModel &model, const LinearMap &channel, const StateVec &rho,
                           double tol = 1e-9);

struct ComplementarityReport {
    bool correctable = false;
    bool complement_deletion = false;
    bool forward_holds = false;    ///< correctable implies complement deletion
    bool converse_holds = false;   ///< complement deletion implies correctable
    bool converse_expected = false;  ///< true in the complex quantum model
    LinearMap complement;
};

ComplementarityReport complementarity_check(const TheoryModel &model, const LinearMap &channel, const StateVec &rho);

/// The real-quantum isometry V = |Phi+><0| + |Psi-><1| split into a channel and its complement.
struct CounterexampleReport {
    LinearMap channel;
    LinearMap complement;
    double channel_marginal_residual = 0.0;     ///< max over real inputs |C(rho) - I/2|
    double complement_marginal_residual = 0.0;  ///< same for the complement
    bool channel_deletion = false;
    bool complement_deletion = false;
    bool channel_correctable = false;
    bool converse_fails = false;  ///< complement deletion yet the channel is not correctable
};

CounterexampleReport real_deletion_counterexample();

enum class OneWayVerdict { OneWay, NotOneWay, Inconclusive };

std::string to_string(OneWayVerdict v);

struct OneWayResult {
    OneWayVerdict verdict = OneWayVerdict::Inconclusive;
    std::vector<double> probabilities;
    std::vector<CMat> unitaries;
    std::vector<LinearMap> recoveries;  ///< U_i^-1
    double residual = 0.0;              ///< unitarity defect of the best Kraus set (or the unitality gap)
    bool internal_state = false;        ///< rho has full rank (eigenvalue floor 1e-10)
    int attempts = 0;
};

/// Searches a random-unitary form C = sum_i p_i U_i . U_i^dagger by rotating the
/// Kraus set. Non-unital channels are reported as NotOneWay; a failed search is
/// Inconclusive. Quantum model, channels A -> A.
OneWayResult one_way_correct(const TheoryModel &model, const LinearMap &channel, const StateVec &rho, Rng &rng,
                             int budget = 200);

}  // namespace purelab
