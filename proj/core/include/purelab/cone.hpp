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
#include <vector>

#include "purelab/linalg.hpp"

namespace purelab {

inline constexpr double kDefaultTol = 1e-9;

/// A finitely generated convex cone in R^n.
///
/// The generator list (V-representation) is authoritative. Models that know the
/// facets analytically may attach them (H-representation), in which case
/// membership is decided by the facet inequalities <f, x> >= -tol.
class Cone {
   public:
    Cone(int ambient_dim, std::vector<RVec> generators, std::optional<std::vector<RVec>> facets = std::nullopt);

    /// The nonnegative orthant, with both representations.
    static Cone orthant(int n);

    int ambient_dim() const { return ambient_dim_; }
    const std::vector<RVec> &generators() const { return generators_; }
    const std::optional<std::vector<RVec>> &facets() const { return facets_; }

   private:
    int ambient_dim_;
    std::vector<RVec> generators_;
    std::optional<std::vector<RVec>> facets_;
};

bool cone_contains(const Cone &c, const RVec &x, double tol = kDefaultTol);
/// Membership through the LP over nonnegative generator combinations, ignoring facets.
bool cone_contains_by_generators(const Cone &c, const RVec &x, double tol = kDefaultTol);
/// Infinity-norm distance from x to the cone, computed by LP over the generators.
double cone_distance(const Cone &c, const RVec &x);
bool dual_cone_contains(const Cone &c, const RVec &f, double tol = kDefaultTol);

/// Dual of a simplicial cone (generators forming a basis); nullopt otherwise.
std::optional<Cone> simplicial_dual(const Cone &c);

struct ConeConstraint {
    Cone cone;
    int offset = 0;  ///< first variable of the slice constrained to lie in `cone`
};

/// maximize objective . x subject to
///   eq_matrix x == eq_rhs, ub_matrix x <= ub_rhs, cone memberships on slices,
///   x_i >= 0 unless free[i].
struct LpProblem {
    RVec objective;
    RMat eq_matrix;
    RVec eq_rhs;
    RMat ub_matrix;
    RVec ub_rhs;
    std::vector<bool> free;  ///< empty means every variable is nonnegative
    std::vector<ConeConstraint> cone_constraints;

    explicit LpProblem(int num_vars = 0);
    int num_vars() const { return static_cast<int>(objective.size()); }
    void add_equality(const RVec &row, double rhs);
    void add_upper(const RVec &row, double rhs);
    void add_lower(const RVec &row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    RVec x;
};

/// Dense two-phase simplex with Bland's rule; deterministic for a fixed input.
LpResult lp_solve(const LpProblem &p);

}  // namespace purelab
