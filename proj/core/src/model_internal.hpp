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

#include "purelab/theory.hpp"

namespace purelab::detail {

/// Checks `positions` against `s` and returns the permutation bringing them to the front.
std::vector<int> front_permutation(const SystemLabel &s, const LinearMap &m, std::span<const int> positions);

/// Local action for models whose composite coordinates are Kronecker products of
/// the factor coordinates (classical, complex quantum).
Applied apply_by_legs(const SystemLabel &s, const RMat &coords, const LinearMap &m, std::span<const int> positions,
                      const std::vector<int> &legs);

std::vector<int> legs_of(const SystemLabel &s, bool squared);

class ClassicalModel final : public TheoryModel {
   public:
    using TheoryModel::TheoryModel;
    TheoryId id() const override { return TheoryId::Classical; }
    int coord_dim(std::span<const int> factors) const override;
    RVec deterministic_effect(const SystemLabel &s) const override;
    RVec invariant_state(const SystemLabel &s) const override;
    RVec embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const override;
    Applied apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                  std::span<const int> positions) const override;
    RMat permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const override;
    bool in_state_cone(const SystemLabel &s, const RVec &x, double tol = kDefaultTol) const override;
    bool in_effect_cone(const SystemLabel &s, const RVec &a, double tol = kDefaultTol) const override;
    std::optional<Cone> polyhedral_state_cone(const SystemLabel &s) const override;
    double state_norm(const SystemLabel &s, const RVec &delta) const override;
    double effect_norm(const SystemLabel &s, const RVec &delta) const override;
    RVec positive_part_effect(const SystemLabel &s, const RVec &delta) const override;
    bool is_pure(const SystemLabel &s, const RVec &x, double tol = 1e-9) const override;
    Purified purify(const SystemLabel &s, const RVec &x, int pad_to = 0) const override;
    RVec random_pure_state(const SystemLabel &s, Rng &rng) const override;
    RVec random_state(const SystemLabel &s, Rng &rng) const override;
    LinearMap random_reversible(const SystemLabel &s, Rng &rng) const override;
    LinearMap random_channel(const SystemLabel &in, const SystemLabel &out, Rng &rng) const override;
    std::vector<RVec> spanning_states(const SystemLabel &s) const override;
};

class QuantumModel final : public HilbertModel {
   public:
    using HilbertModel::HilbertModel;
    TheoryId id() const override { return TheoryId::Quantum; }
    bool is_real() const override { return false; }
    int coord_dim(std::span<const int> factors) const override;
    RVec embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const override;
    Applied apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                  std::span<const int> positions) const override;
    RMat permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const override;
    CMat to_matrix(const SystemLabel &s, const CVec &coords) const override;
    CVec from_matrix_c(const SystemLabel &s, const CMat &x) const override;
    using HilbertModel::from_matrix;
    using HilbertModel::to_matrix;
};

class RealQuantumModel final : public HilbertModel {
   public:
    using HilbertModel::HilbertModel;
    TheoryId id() const override { return TheoryId::RealQuantum; }
    bool is_real() const override { return true; }
    int coord_dim(std::span<const int> factors) const override;
    RVec embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const override;
    Applied apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                  std::span<const int> positions) const override;
    RMat permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const override;
    CMat to_matrix(const SystemLabel &s, const CVec &coords) const override;
    CVec from_matrix_c(const SystemLabel &s, const CMat &x) const override;
    using HilbertModel::from_matrix;
    using HilbertModel::to_matrix;
};

}  // namespace purelab::detail
