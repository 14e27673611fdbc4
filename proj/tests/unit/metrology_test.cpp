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


#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "purelab/errors.hpp"
#include "purelab/metrology.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

struct Qubit {
    ModelPtr q = quantum_model(2);
    const HilbertModel &h = require_hilbert(*q, "test");
    SystemLabel a = q->atom();
    StateVec ket(const CVec &v) const { return h.pure_state(a, v); }
    StateVec zero() const { return ket(linalg::basis_ket(2, 0)); }
    StateVec one() const { return ket(linalg::basis_ket(2, 1)); }
    StateVec plus() const { return ket(CVec(CVec::Ones(2) / std::sqrt(2.0))); }
};

TEST(StateNorm, Examples) {
    Qubit t;
    Rng rng(1);
    EXPECT_NEAR(state_norm(*t.q, t.a, t.q->random_state(t.a, rng)), 1.0, 1e-12);

    auto c = classical_model(2);
    RVec d(2);
    d << 0.7, -0.3;
    EXPECT_NEAR(state_norm(*c, c->atom(), d), 1.0, 1e-12);

    RVec diff = t.zero().coords - t.plus().coords;
    const double oracle = oracle::trace_norm(t.h.to_matrix(t.a, diff));
    EXPECT_NEAR(oracle, std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(state_norm(*t.q, t.a, diff), oracle, 1e-12);
}

TEST(StateNorm, ClassicalEqualsL1) {
    auto c = classical_model(5);
    Rng rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        RVec d(5);
        for (int i = 0; i < 5; ++i) d(i) = u(rng);
        EXPECT_NEAR(state_norm(*c, c->atom(), d), d.cwiseAbs().sum(), 1e-12);
    }
}

TEST(StateNorm, MonotoneUnderChannels) {
    for (auto id : {TheoryId::Classical, TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 3);
        Rng rng(3);
        auto a = m->atom();
        auto b = m->atom(2);
        for (int trial = 0; trial < 200; ++trial) {
            RVec delta = m->random_state(a, rng) - m->random_state(a, rng);
            LinearMap c = m->random_channel(a, b, rng);
            EXPECT_LE(state_norm(*m, b, c(delta)), state_norm(*m, a, delta) + 1e-9);
        }
    }
}

TEST(Discriminate, Examples) {
    Qubit t;
    EXPECT_NEAR(discriminate(*t.q, t.zero(), t.one(), 0.5, 0.5).p_success, 1.0, 1e-12);
    EXPECT_NEAR(discriminate(*t.q, t.zero(), t.plus(), 0.5, 0.5).p_success, (1.0 + 1.0 / std::sqrt(2.0)) / 2.0, 1e-12);
    EXPECT_NEAR(discriminate(*t.q, t.plus(), t.plus(), 0.3, 0.7).p_success, 0.7, 1e-12);
    EXPECT_THROW(discriminate(*t.q, t.zero(), t.one(), 0.5, 0.6), ContractViolation);
}

TEST(Discriminate, DegeneratePriorsUseTrivialTest) {
    Qubit t;
    auto r = discriminate(*t.q, t.zero(), t.plus(), 0.0, 1.0);
    EXPECT_NEAR(r.p_success, 1.0, 1e-15);
    EXPECT_EQ(r.a0.coords.norm(), 0.0);
}

TEST(Discriminate, OptimalityAndSymmetry) {
    for (auto id : {TheoryId::Classical, TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 3);
        Rng rng(4);
        std::uniform_real_distribution<double> u(0, 1);
        auto a = m->atom();
        const RVec e = m->deterministic_effect(a);
        for (int trial = 0; trial < 50; ++trial) {
            StateVec r0{a, m->random_state(a, rng)}, r1{a, m->random_state(a, rng)};
            const double p0 = u(rng);
            const double p1 = 1.0 - p0;
            auto r = discriminate(*m, r0, r1, p0, p1);
            const double formula = 0.5 * (1.0 + state_norm(*m, a, p1 * r1.coords - p0 * r0.coords));
            EXPECT_NEAR(r.p_success, formula, 1e-9);
            EXPECT_GE(r.p_success, std::max(p0, p1) - 1e-12);
            EXPECT_LE(r.p_success, 1.0 + 1e-12);
            EXPECT_TRUE(m->is_effect(a, r.a0.coords, 1e-9));
            EXPECT_TRUE(m->is_effect(a, r.a1.coords, 1e-9));
            EXPECT_LT((r.a0.coords + r.a1.coords - e).norm(), 1e-12);
            auto swapped = discriminate(*m, r1, r0, p1, p0);
            EXPECT_NEAR(swapped.p_success, r.p_success, 1e-14);
        }
    }
}

TEST(WorstCase, Examples) {
    Qubit t;
    auto orth = worst_case_test(*t.q, t.zero(), t.one());
    EXPECT_FALSE(orth.indistinguishable);
    // Helstrom effect |0><0| gives <a,rho1> = 0, so it is averaged with e: (1, 1/2) -> 1/3.
    EXPECT_NEAR(orth.error, 1.0 / 3.0, 1e-12);

    auto w = worst_case_test(*t.q, t.zero(), t.plus());
    const double a0 = w.a.coords.dot(t.zero().coords);
    const double a1 = w.a.coords.dot(t.plus().coords);
    EXPECT_GE(a1, 0.5 - 1e-12);
    EXPECT_NEAR(w.error, a1 / (a0 + a1), 1e-15);
    EXPECT_LT(w.error, 0.5);
    // realised error probabilities of the constructed test
    EXPECT_NEAR(w.a1.coords.dot(t.zero().coords), w.error, 1e-12);
    EXPECT_NEAR(w.a0.coords.dot(t.plus().coords), w.error, 1e-12);
    EXPECT_TRUE(t.q->is_effect(t.a, w.a0.coords, 1e-9));

    EXPECT_TRUE(worst_case_test(*t.q, t.plus(), t.plus()).indistinguishable);
}

TEST(WorstCase, ClassicalAndRealModels) {
    for (auto id : {TheoryId::Classical, TheoryId::RealQuantum}) {
        auto m = make_model(id, 3);
        Rng rng(6);
        auto a = m->atom();
        for (int trial = 0; trial < 30; ++trial) {
            StateVec r0{a, m->random_state(a, rng)}, r1{a, m->random_state(a, rng)};
            auto w = worst_case_test(*m, r0, r1);
            EXPECT_LT(w.error, 0.5);
            EXPECT_NEAR(w.a1.coords.dot(r0.coords), w.a0.coords.dot(r1.coords), 1e-12);
            EXPECT_TRUE(m->is_effect(a, w.a0.coords, 1e-9));
        }
    }
}

TEST(EffectNorm, Examples) {
    Qubit t;
    EXPECT_NEAR(effect_norm(*t.q, t.a, t.h.from_matrix(t.a, oracle::pauli('Z'))), 1.0, 1e-12);
    auto c = classical_model(2);
    RVec d(2);
    d << 0.2, -0.9;
    EXPECT_NEAR(effect_norm(*c, c->atom(), d), 0.9, 1e-15);
    for (auto id : {TheoryId::Classical, TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 3);
        EXPECT_NEAR(effect_norm(*m, m->atom(), m->deterministic_effect(m->atom())), 1.0, 1e-12);
    }
}

LinearMap difference(const LinearMap &x, const LinearMap &y) {
    LinearMap d = x;
    d.matrix -= y.matrix;
    d.kraus.reset();
    d.tag = MapTag::Unconstrained;
    return d;
}

TEST(TransformationNorm, ZeroDifference) {
    Qubit t;
    LinearMap zero = difference(t.q->identity(t.a), t.q->identity(t.a));
    EXPECT_EQ(transformation_norm(*t.q, zero).lower_bound, 0.0);
}

TEST(TransformationNorm, UnitaryPairsMatchEigenphaseFormula) {
    Qubit t;
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        CMat u = linalg::haar_unitary(2, rng);
        CMat v = linalg::haar_unitary(2, rng);
        LinearMap delta =
            difference(standard::unitary_channel(*t.q, t.a, u), standard::unitary_channel(*t.q, t.a, v));
        auto r = transformation_norm(*t.q, delta);
        EXPECT_NEAR(r.lower_bound, oracle::unitary_diamond_distance(u, v), 1e-6);
        EXPECT_NEAR(lifted_output_norm(*t.q, delta, r.certificate), r.lower_bound, 1e-10);
    }
}

TEST(TransformationNorm, QutritUnitariesMatchEigenphaseFormula) {
    auto q = quantum_model(3);
    auto a = q->atom();
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        CMat u = linalg::haar_unitary(3, rng);
        CMat v = linalg::haar_unitary(3, rng);
        LinearMap delta = difference(standard::unitary_channel(*q, a, u), standard::unitary_channel(*q, a, v));
        EXPECT_NEAR(transformation_norm(*q, delta).lower_bound, oracle::unitary_diamond_distance(u, v), 1e-6);
    }
}

TEST(TransformationNorm, DepolarizingAgainstGrid) {
    Qubit t;
    for (double p : {0.1, 0.5, 0.9}) {
        LinearMap delta = difference(standard::depolarizing(*t.q, t.a, p), t.q->identity(t.a));
        auto channel = [p](const CMat &rho) {
            // (D_p - I) (x) I on a two-qubit operator, written out
            CMat reduced = CMat::Zero(2, 2);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    for (int k = 0; k < 2; ++k) reduced(i, j) += rho(2 * k + i, 2 * k + j);
                }
            }
            return CMat(-p * rho + p * oracle::kron(CMat::Identity(2, 2) / 2.0, reduced));
        };
        const double grid = oracle::grid_transformation_norm(channel, 40);
        EXPECT_NEAR(transformation_norm(*t.q, delta).lower_bound, grid, 1e-4);
    }
}

TEST(TransformationNorm, MonotoneUnderChannels) {
    Qubit t;
    Rng rng(10);
    NormBudget budget;
    budget.restarts = 4;
    for (int trial = 0; trial < 10; ++trial) {
        LinearMap delta = difference(t.q->random_channel(t.a, t.a, rng), t.q->random_channel(t.a, t.a, rng));
        const double base = transformation_norm(*t.q, delta, budget).lower_bound;
        LinearMap e = t.q->random_channel(t.a, t.a, rng);
        LinearMap c = t.q->random_channel(t.a, t.a, rng);
        LinearMap squeezed = t.q->compose_seq(e, t.q->compose_seq(delta, c));
        EXPECT_LE(transformation_norm(*t.q, squeezed, budget).lower_bound, base + 1e-6);
        LinearMap u = t.q->random_reversible(t.a, rng);
        LinearMap v = t.q->random_reversible(t.a, rng);
        LinearMap rotated = t.q->compose_seq(u, t.q->compose_seq(delta, v));
        EXPECT_NEAR(transformation_norm(*t.q, rotated, budget).lower_bound, base, 1e-6);
    }
}

TEST(TransformationNorm, ClassicalExactAndRealUnsupported) {
    auto c = classical_model(3);
    auto a = c->atom();
    Rng rng(11);
    LinearMap delta = difference(c->random_channel(a, a, rng), c->identity(a));
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) expected = std::max(expected, delta.matrix.col(i).cwiseAbs().sum());
    auto r = transformation_norm(*c, delta);
    EXPECT_NEAR(r.lower_bound, expected, 1e-12);
    EXPECT_NEAR(lifted_output_norm(*c, delta, r.certificate), expected, 1e-12);

    auto rq = real_quantum_model(2);
    LinearMap rd = difference(rq->identity(rq->atom()), rq->identity(rq->atom()));
    EXPECT_THROW(transformation_norm(*rq, rd), Unsupported);
}

}  // namespace
}  // namespace purelab
