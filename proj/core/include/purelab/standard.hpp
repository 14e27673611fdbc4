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

// A catalogue of frequently used states, effects and channels, defined for every
// model where they make sense. Hilbert-only objects raise Unsupported elsewhere.

#include <vector>

#include "purelab/theory.hpp"

namespace purelab::standard {

CMat pauli(char which);  ///< 'I', 'X', 'Y' or 'Z'
CMat hadamard();
CMat cnot();
/// Weyl shift X|j> = |j+1 mod d> and clock Z|j> = w^j |j>.
CMat weyl_shift(int d);
CMat weyl_clock(int d);

std::vector<CMat> depolarizing_kraus(int d, double p);
std::vector<CMat> amplitude_damping_kraus(double gamma);
std::vector<CMat> bit_flip_kraus(double p);
std::vector<CMat> phase_flip_kraus(double p);

/// The point mass / basis projector on outcome k of the whole system.
StateVec basis_state(const TheoryModel &model, const SystemLabel &s, int k);
EffectVec basis_effect(const TheoryModel &model, const SystemLabel &s, int k);
/// The maximally correlated state on a d (x) d system: |Phi> = sum_i |ii>/sqrt(d), or
/// the classical distribution uniform on the diagonal.
StateVec max_correlated_state(const TheoryModel &model, const SystemLabel &pair);
/// The (unnormalized) projector onto the maximally correlated state, or the
/// classical "outcomes agree" effect.
EffectVec max_correlated_effect(const TheoryModel &model, const SystemLabel &pair);

LinearMap unitary_channel(const TheoryModel &model, const SystemLabel &s, const CMat &u);
/// rho -> (1 - p) rho + p tr(rho) chi on any model.
LinearMap depolarizing(const TheoryModel &model, const SystemLabel &s, double p);
/// Flips a bit with probability p (classical permutation or Pauli X).
LinearMap bit_flip(const TheoryModel &model, const SystemLabel &s, double p);
LinearMap phase_flip(const TheoryModel &model, const SystemLabel &s, double p);
LinearMap amplitude_damping(const TheoryModel &model, const SystemLabel &s, double gamma);
/// Complete measurement in the computational basis, result re-prepared.
LinearMap dephasing(const TheoryModel &model, const SystemLabel &s);
/// The map A (x) B -> B (x) A.
LinearMap swap(const TheoryModel &model, const SystemLabel &a, const SystemLabel &b);

}  // namespace purelab::standard
