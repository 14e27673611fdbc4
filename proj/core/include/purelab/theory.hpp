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

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "purelab/cone.hpp"
#include "purelab/objects.hpp"

namespace purelab {

/// Result of a local action: the system after the action and the new coordinates
/// (one column per input column).
struct Applied {
    SystemLabel system;
    RMat coords;
};

/// A purification returned by a model: a pure state on A (x) A~.
struct Purified {
    SystemLabel joint;
    SystemLabel purifying;
    RVec coords;
    CVec psi;  ///< state vector for matrix-backed models (empty for classical)
};

/// A pluggable operational-probabilistic theory.
///
/// Every model is immutable; all methods are re-entrant and randomness always comes
/// from a caller-owned generator. Composite systems list their atomic factors;
/// local actions address factors by position. After apply(), the map's output
/// factors come first, followed by the untouched factors in their original order.
class TheoryModel {
   public:
    explicit TheoryModel(int default_dim) : default_dim_(default_dim) {}
    virtual ~TheoryModel() = default;

    virtual TheoryId id() const = 0;
    int default_dim() const { return default_dim_; }

    SystemLabel system(std::vector<int> factors) const;
    SystemLabel atom() const { return system({default_dim_}); }
    SystemLabel atom(int d) const { return system({d}); }
    SystemLabel trivial() const { return system({}); }
    SystemLabel compose(const SystemLabel &a, const SystemLabel &b) const;
    virtual int coord_dim(std::span<const int> factors) const = 0;

    virtual RVec deterministic_effect(const SystemLabel &s) const = 0;
    virtual RVec invariant_state(const SystemLabel &s) const = 0;
    virtual RVec embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const = 0;

    /// Applies `m` to the factors at `positions` of every column of `coords`.
    virtual Applied apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                          std::span<const int> positions) const = 0;
    /// Reorders factors: factor i of the result is factor perm[i] of `s`.
    virtual RMat permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const = 0;

    virtual bool in_state_cone(const SystemLabel &s, const RVec &x, double tol = kDefaultTol) const = 0;
    virtual bool in_effect_cone(const SystemLabel &s, const RVec &a, double tol = kDefaultTol) const = 0;
    /// 0 <= a <= e in the effect order.
    bool is_effect(const SystemLabel &s, const RVec &a, double tol = kDefaultTol) const;
    virtual std::optional<Cone> polyhedral_state_cone(const SystemLabel &) const { return std::nullopt; }

    /// Operational norm of a signed state: sup minus inf of <a, delta> over effects.
    virtual double state_norm(const SystemLabel &s, const RVec &delta) const = 0;
    /// sup over normalized states of |<delta, rho>|.
    virtual double effect_norm(const SystemLabel &s, const RVec &delta) const = 0;
    /// Effect attaining the positive part of a signed state (Helstrom projector).
    virtual RVec positive_part_effect(const SystemLabel &s, const RVec &delta) const = 0;

    virtual bool is_pure(const SystemLabel &s, const RVec &x, double tol = 1e-9) const = 0;
    /// Purifies a normalized state; `pad_to` > rank pads the purifying system.
    virtual Purified purify(const SystemLabel &s, const RVec &x, int pad_to = 0) const = 0;

    virtual RVec random_pure_state(const SystemLabel &s, Rng &rng) const = 0;
    virtual RVec random_state(const SystemLabel &s, Rng &rng) const = 0;
    virtual LinearMap random_reversible(const SystemLabel &s, Rng &rng) const = 0;
    virtual LinearMap random_channel(const SystemLabel &in, const SystemLabel &out, Rng &rng) const = 0;
    /// A finite set of normalized states spanning S_R(A).
    virtual std::vector<RVec> spanning_states(const SystemLabel &s) const = 0;

    // -- derived operations ------------------------------------------------------

    RVec marginal(const SystemLabel &s, const RVec &x, std::span<const int> keep) const;
    SystemLabel subsystem(const SystemLabel &s, std::span<const int> keep) const;
    SystemLabel permuted(const SystemLabel &s, std::span<const int> perm) const;

    virtual LinearMap identity(const SystemLabel &s) const;
    virtual LinearMap discard(const SystemLabel &s) const;
    virtual LinearMap prepare(const StateVec &rho) const;
    virtual LinearMap observe(const EffectVec &a) const;
    /// second o first
    LinearMap compose_seq(const LinearMap &second, const LinearMap &first) const;
    LinearMap tensor(const LinearMap &a, const LinearMap &b) const;
    LinearMap lift_local(const LinearMap &m, const SystemLabel &b) const { return tensor(m, identity(b)); }
    /// Swaps the factor order of a map's input or output (or both) per `in_perm`/`out_perm`.
    LinearMap permute_map(const LinearMap &m, std::span<const int> in_perm, std::span<const int> out_perm) const;

    StateVec state(const SystemLabel &s, RVec coords) const;
    EffectVec effect(const SystemLabel &s, RVec coords) const;

   private:
    int default_dim_;
};

using ModelPtr = std::shared_ptr<const TheoryModel>;

/// Shared base of the complex and real Hilbert-space models.
class HilbertModel : public TheoryModel {
   public:
    using TheoryModel::TheoryModel;

    virtual bool is_real() const = 0;

    /// Operator of a coordinate vector (complex coordinates allowed).
    virtual CMat to_matrix(const SystemLabel &s, const CVec &coords) const = 0;
    virtual CVec from_matrix_c(const SystemLabel &s, const CMat &x) const = 0;
    CMat to_matrix(const SystemLabel &s, const RVec &coords) const { return to_matrix(s, CVec(coords.cast<cplx>())); }
    RVec from_matrix(const SystemLabel &s, const CMat &x) const { return from_matrix_c(s, x).real(); }

    LinearMap map_from_kraus(const SystemLabel &in, const SystemLabel &out, std::vector<CMat> kraus,
                             MapTag tag = MapTag::Channel) const;
    /// Choi operator J = sum_ij C(|i><j|) (x) |i><j| on out (x) in.
    CMat choi(const LinearMap &m) const;
    /// Stored Kraus operators if present, else canonical ones from the Choi operator.
    std::vector<CMat> kraus_of(const LinearMap &m) const;
    /// Kraus operators from the Choi eigendecomposition: as many as the Choi rank.
    std::vector<CMat> minimal_kraus(const LinearMap &m) const;

    StateVec state_from_matrix(const SystemLabel &s, const CMat &x) const;
    StateVec pure_state(const SystemLabel &s, const CVec &psi) const;

    double state_norm(const SystemLabel &s, const RVec &delta) const override;
    double effect_norm(const SystemLabel &s, const RVec &delta) const override;
    RVec positive_part_effect(const SystemLabel &s, const RVec &delta) const override;
    bool in_state_cone(const SystemLabel &s, const RVec &x, double tol = kDefaultTol) const override;
    bool in_effect_cone(const SystemLabel &s, const RVec &a, double tol = kDefaultTol) const override;
    bool is_pure(const SystemLabel &s, const RVec &x, double tol = 1e-9) const override;
    Purified purify(const SystemLabel &s, const RVec &x, int pad_to = 0) const override;
    RVec deterministic_effect(const SystemLabel &s) const override;
    RVec invariant_state(const SystemLabel &s) const override;
    RVec random_pure_state(const SystemLabel &s, Rng &rng) const override;
    RVec random_state(const SystemLabel &s, Rng &rng) const override;
    LinearMap random_reversible(const SystemLabel &s, Rng &rng) const override;
    LinearMap random_channel(const SystemLabel &in, const SystemLabel &out, Rng &rng) const override;
    std::vector<RVec> spanning_states(const SystemLabel &s) const override;
    LinearMap identity(const SystemLabel &s) const override;
    LinearMap discard(const SystemLabel &s) const override;
    LinearMap prepare(const StateVec &rho) const override;
    LinearMap observe(const EffectVec &a) const override;
};

/// Orthonormal Hermitian basis of d x d matrices: I/sqrt(d), then generalized
/// Gell-Mann matrices ordered symmetric, antisymmetric, diagonal. With `real`
/// the antisymmetric block is dropped (real symmetric matrices).
const std::vector<CMat> &hermitian_basis(int d, bool real);

ModelPtr quantum_model(int d);
ModelPtr classical_model(int n);
ModelPtr real_quantum_model(int d);
ModelPtr make_model(TheoryId id, int d);

/// Narrows to a matrix-backed model or throws Unsupported naming `what`.
const HilbertModel &require_hilbert(const TheoryModel &model, const char *what);

enum class ChannelClass { Channel, Transformation, Neither };

struct ChannelCheck {
    ChannelClass verdict = ChannelClass::Neither;
    double normalization_residual = 0.0;  ///< max |e_B M - e_A|
    double positivity_residual = 0.0;     ///< most negative eigenvalue / coordinate (0 if positive)
    bool subnormalized = false;
};

/// Classifies a map by normalization, complete positivity and sub-normalization.
ChannelCheck check_channel(const LinearMap &m, const TheoryModel &model, double tol = 1e-10);

}  // namespace purelab
