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

#include "purelab/theory.hpp"

namespace purelab {

/// sup - inf of <a, delta> over effects a. Polyhedral models solve the two linear
/// programs over the effect set; matrix-backed models use the trace norm.
double state_norm(const TheoryModel &model, const SystemLabel &s, const RVec &delta);
/// sup over normalized states of |<delta, rho>|, with no ancilla.
double effect_norm(const TheoryModel &model, const SystemLabel &s, const RVec &delta);

struct DiscriminationResult {
    double p_success = 0.0;
    EffectVec a0;  ///< guess "rho0"
    EffectVec a1;  ///< guess "rho1"
    RVec witness;  ///< pi1 rho1 - pi0 rho0
};

/// Optimal two-state discrimination with priors pi0 + pi1 = 1.
DiscriminationResult discriminate(const TheoryModel &model, const StateVec &rho0, const StateVec &rho1, double pi0,
                                  double pi1);

struct WorstCaseTest {
    bool indistinguishable = false;
    double error = 0.5;  ///< p(1|0) = p(0|1)
    double q = 0.0;
    EffectVec a;  ///< the separating effect the test is built from
    EffectVec a0;
    EffectVec a1;
};

/// Binary test with equal error probabilities below 1/2: a0 = q a, a1 = e - a0 with
/// q = 1 / (<a, rho0> + <a, rho1>), where a separates the states and <a, rho1> >= 1/2.
WorstCaseTest worst_case_test(const TheoryModel &model, const StateVec &rho0, const StateVec &rho1,
                              double tol = 1e-12);

struct NormBudget {
    int restarts = 8;          ///< the maximally entangled start plus restarts - 1 random ones
    int max_iterations = 200;  ///< seesaw rounds per start
    double tolerance = 1e-13;  ///< stop when a round improves by less than this
    uint64_t seed = 1;
};

struct TransformationNorm {
    double lower_bound = 0.0;
    StateVec certificate;  ///< pure input on A (x) A' attaining the bound
    int best_start = 0;
    int iterations = 0;
};

/// Lower bound on sup over inputs rho on A (x) A' of ||(delta (x) I)(rho)|| with the
/// ancilla A' as large as A. Quantum: seesaw between the sign operator of the output
/// and the top eigenvector of its Heisenberg pull-back. Classical: exact, attained
/// at a vertex. Real-quantum: Unsupported.
TransformationNorm transformation_norm(const TheoryModel &model, const LinearMap &delta,
                                       const NormBudget &budget = {});

/// ||(delta (x) I)(x)|| for a state x on input (x) ancilla; used to check certificates.
double lifted_output_norm(const TheoryModel &model, const LinearMap &delta, const StateVec &input);

}  // namespace purelab
