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

#include "purelab/cone.hpp"

#include <cmath>
#include <limits>

#include "purelab/errors.hpp"

namespace purelab {

Cone::Cone(int ambient_dim, std::vector<RVec> generators, std::optional<std::vector<RVec>> facets)
    : ambient_dim_(ambient_dim), generators_(std::move(generators)), facets_(std::move(facets)) {
    if (ambient_dim_ < 1) throw ContractViolation("Cone: ambient dimension must be positive");
    for (const auto &g : generators_) {
        if (g.size() != ambient_dim_) throw ContractViolation("Cone: generator dimension mismatch");
        if (!g.allFinite()) throw ContractViolation("Cone: generator with non-finite entries");
    }
    if (facets_) {
        for (const auto &f : *facets_) {
            if (f.size() != ambient_dim_) throw ContractViolation("Cone: facet dimension mismatch");
            for (const auto &g : generators_) {
                if (f.dot(g) < -kDefaultTol) throw ContractViolation("Cone: generator violates a facet");
            }
        }
    }
}

Cone Cone::orthant(int n) {
    std::vector<RVec> units;
    for (int i = 0; i < n; ++i) units.push_back(RVec::Unit(n, i));
    return Cone(n, units, units);
}

bool cone_contains(const Cone &c, const RVec &x, double tol) {
    if (x.size() != c.ambient_dim()) throw ContractViolation("cone_contains: dimension mismatch");
    if (tol <= 0) throw ContractViolation("cone_contains: tolerance must be positive");
    if (c.facets()) {
        for (const auto &f : *c.facets()) {
            if (f.dot(x) < -tol) return false;
        }
        return true;
    }
    return cone_contains_by_generators(c, x, tol);
}

double cone_distance(const Cone &c, const RVec &x) {
    if (x.size() != c.ambient_dim()) throw ContractViolation("cone_distance: dimension mismatch");
    const int m = static_cast<int>(c.generators().size());
    const int n = c.ambient_dim();
    // variables: lambda (m), t; minimise t with -t <= x - G lambda <= t
    LpProblem p(m + 1);
    p.objective(m) = -1.0;
    for (int i = 0; i < n; ++i) {
        RVec row = RVec::Zero(m + 1);
        for (int k = 0; k < m; ++k) row(k) = c.generators()[k](i);
        row(m) = -1.0;
        p.add_upper(row, x(i));
        row.head(m) *= -1.0;
        p.add_upper(row, -x(i));
    }
    auto r = lp_solve(p);
    if (r.status != LpStatus::Optimal) return std::numeric_limits<double>::infinity();
    return -r.value;
}

bool cone_contains_by_generators(const Cone &c, const RVec &x, double tol) {
    if (x.size() != c.ambient_dim()) throw ContractViolation("cone_contains: dimension mismatch");
    if (tol <= 0) throw ContractViolation("cone_contains: tolerance must be positive");
    return cone_distance(c, x) <= tol;
}

bool dual_cone_contains(const Cone &c, const RVec &f, double tol) {
    if (f.size() != c.ambient_dim()) throw ContractViolation("dual_cone_contains: dimension mismatch");
    if (tol <= 0) throw ContractViolation("dual_cone_contains: tolerance must be positive");
    for (const auto &g : c.generators()) {
        if (f.dot(g) < -tol) return false;
    }
    return true;
}

std::optional<Cone> simplicial_dual(const Cone &c) {
    const int n = c.ambient_dim();
    if (static_cast<int>(c.generators().size()) != n) return std::nullopt;
    RMat g(n, n);
    for (int k = 0; k < n; ++k) g.col(k) = c.generators()[k];
    Eigen::FullPivLU<RMat> lu(g);
    if (!lu.isInvertible()) return std::nullopt;
    // rows of G^{-1} pair to the Kronecker delta with the generators
    RMat inv = lu.inverse();
    std::vector<RVec> dual_gens;
    for (int k = 0; k < n; ++k) dual_gens.push_back(inv.row(k).transpose());
    return Cone(n, dual_gens, c.generators());
}

LpProblem::LpProblem(int num_vars)
    : objective(RVec::Zero(num_vars)),
      eq_matrix(0, num_vars),
      eq_rhs(0),
      ub_matrix(0, num_vars),
      ub_rhs(0) {}

void LpProblem::add_equality(const RVec &row, double rhs) {
    eq_matrix.conservativeResize(eq_matrix.rows() + 1, num_vars());
    eq_matrix.row(eq_matrix.rows() - 1) = row.transpose();
    eq_rhs.conservativeResize(eq_rhs.size() + 1);
    eq_rhs(eq_rhs.size() - 1) = rhs;
}

void LpProblem::add_upper(const RVec &row, double rhs) {
    ub_matrix.conservativeResize(ub_matrix.rows() + 1, num_vars());
    ub_matrix.row(ub_matrix.rows() - 1) = row.transpose();
    ub_rhs.conservativeResize(ub_rhs.size() + 1);
    ub_rhs(ub_rhs.size() - 1) = rhs;
}

void LpProblem::add_lower(const RVec &row, double rhs) { add_upper(-row, -rhs); }

namespace {

constexpr double kPivotEps = 1e-11;

// Tableau simplex over y >= 0 with rows A y = b, b >= 0.
class Tableau {
   public:
    Tableau(const RMat &a, const RVec &b) : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())) {
        // columns: structural (n), artificial (m), rhs
        t_ = RMat::Zero(m_ + 1, n_ + m_ + 1);
        t_.block(0, 0, m_, n_) = a;
        t_.block(0, n_, m_, m_) = RMat::Identity(m_, m_);
        t_.block(0, n_ + m_, m_, 1) = b;
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
        active_.assign(n_ + m_, true);
    }

    // Maximises cost . y over the currently active columns; returns false if unbounded.
    bool optimize(const RVec &cost) {
        const int cols = n_ + m_;
        // objective row holds reduced costs c_j - c_B B^{-1} A_j
        t_.row(m_).setZero();
        for (int j = 0; j < cols; ++j) t_(m_, j) = cost(j);
        for (int i = 0; i < m_; ++i) {
            const double cb = cost(basis_[i]);
            if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
        }
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (active_[j] && t_(m_, j) > kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double aij = t_(i, enter);
                if (aij <= kPivotEps) continue;
                const double ratio = t_(i, cols) / aij;
                if (leave < 0 || ratio < best - 1e-13 ||
                    (std::abs(ratio - best) <= 1e-13 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        for (int i = 0; i <= m_; ++i) {
            if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
        }
        basis_[row] = col;
    }

    // Moves zero-level artificial variables out of the basis; drops redundant rows.
    void expel_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            int col = -1;
            for (int j = 0; j < n_; ++j) {
                if (std::abs(t_(i, j)) > 1e-9) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) {
                pivot(i, col);
            } else {
                t_.row(i).setZero();
            }
        }
        for (int j = n_; j < n_ + m_; ++j) active_[j] = false;
    }

    double rhs_objective() const { return -t_(m_, n_ + m_); }

    RVec solution() const {
        RVec y = RVec::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) y(basis_[i]) = t_(i, n_ + m_);
        }
        return y;
    }

    int rows() const { return m_; }
    int structural() const { return n_; }

   private:
    int m_, n_;
    RMat t_;
    std::vector<int> basis_;
    std::vector<bool> active_;
};

}  // namespace

LpResult lp_solve(const LpProblem &p) {
    const int nv = p.num_vars();
    if (p.eq_matrix.cols() != nv || p.ub_matrix.cols() != nv || p.eq_rhs.size() != p.eq_matrix.rows() ||
        p.ub_rhs.size() != p.ub_matrix.rows()) {
        throw ContractViolation("lp_solve: inconsistent problem dimensions");
    }
    if (!p.free.empty() && static_cast<int>(p.free.size()) != nv) {
        throw ContractViolation("lp_solve: free-variable mask has wrong length");
    }

    // gather inequality rows, cone constraints become -f . x_slice <= 0
    RMat ub = p.ub_matrix;
    RVec ubr = p.ub_rhs;
    for (const auto &cc : p.cone_constraints) {
        if (!cc.cone.facets()) {
            throw ContractViolation("lp_solve: cone constraints need an H-representation");
        }
        if (cc.offset < 0 || cc.offset + cc.cone.ambient_dim() > nv) {
            throw ContractViolation("lp_solve: cone slice out of range");
        }
        for (const auto &f : *cc.cone.facets()) {
            ub.conservativeResize(ub.rows() + 1, nv);
            ub.row(ub.rows() - 1).setZero();
            ub.row(ub.rows() - 1).segment(cc.offset, f.size()) = -f.transpose();
            ubr.conservativeResize(ubr.size() + 1);
            ubr(ubr.size() - 1) = 0.0;
        }
    }

    // standard-form columns: x_i (or x_i^+, x_i^-), then one slack per inequality
    std::vector<int> plus_col(nv), minus_col(nv, -1);
    int cols = 0;
    for (int i = 0; i < nv; ++i) {
        plus_col[i] = cols++;
        if (!p.free.empty() && p.free[i]) minus_col[i] = cols++;
    }
    const int slack0 = cols;
    cols += static_cast<int>(ub.rows());
    const int rows = static_cast<int>(p.eq_matrix.rows() + ub.rows());

    RMat a = RMat::Zero(rows, cols);
    RVec b(rows);
    auto place = [&](int r, const RVec &row) {
        for (int i = 0; i < nv; ++i) {
            a(r, plus_col[i]) = row(i);
            if (minus_col[i] >= 0) a(r, minus_col[i]) = -row(i);
        }
    };
    for (Eigen::Index r = 0; r < p.eq_matrix.rows(); ++r) {
        place(static_cast<int>(r), p.eq_matrix.row(r).transpose());
        b(r) = p.eq_rhs(r);
    }
    for (Eigen::Index k = 0; k < ub.rows(); ++k) {
        const int r = static_cast<int>(p.eq_matrix.rows() + k);
        place(r, ub.row(k).transpose());
        a(r, slack0 + k) = 1.0;
        b(r) = ubr(k);
    }
    for (int r = 0; r < rows; ++r) {
        if (b(r) < 0) {
            a.row(r) *= -1.0;
            b(r) = -b(r);
        }
    }

    Tableau tab(a, b);
    RVec phase1 = RVec::Zero(cols + rows);
    phase1.tail(rows).setConstant(-1.0);
    tab.optimize(phase1);
    LpResult result;
    const double scale = 1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
    if (tab.rhs_objective() < -1e-9 * scale) {
        result.status = LpStatus::Infeasible;
        return result;
    }
    tab.expel_artificials();

    RVec cost = RVec::Zero(cols + rows);
    for (int i = 0; i < nv; ++i) {
        cost(plus_col[i]) = p.objective(i);
        if (minus_col[i] >= 0) cost(minus_col[i]) = -p.objective(i);
    }
    if (!tab.optimize(cost)) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    RVec y = tab.solution();
    result.x = RVec(nv);
    for (int i = 0; i < nv; ++i) {
        result.x(i) = y(plus_col[i]) - (minus_col[i] >= 0 ? y(minus_col[i]) : 0.0);
    }
    result.value = p.objective.dot(result.x);
    result.status = LpStatus::Optimal;
    return result;
}

}  // namespace purelab
