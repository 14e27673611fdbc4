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

#include <cmath>

#include "oracles.hpp"
#include "purelab/errors.hpp"
#include "purelab/protocols.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

double max_diff(const RMat &x, const RMat &y) { return (x - y).cwiseAbs().maxCoeff(); }

StateVec bell(const TheoryModel &m, int d) {
    const auto &h = require_hilbert(m, "test");
    return h.pure_state(m.system({d, d}), linalg::max_entangled(d));
}

TEST(EntanglementSwap, BellPairs) {
    auto q = quantum_model(2);
    const StateVec phi = bell(*q, 2);
    const SwapResult s = entanglement_swap(*q, phi);
    EXPECT_NEAR(s.probability, 0.25, 1e-12);
    EXPECT_LT(s.residual, 1e-10);
    // oracle: the swapping effect on B A' is the Bell projector itself
    const CMat bell_proj = oracle::kron(CMat::Identity(1, 1), CMat(linalg::ket_bra(linalg::max_entangled(2),
                                                                                   linalg::max_entangled(2))));
    const auto &h = require_hilbert(*q, "test");
    EXPECT_LT(linalg::max_abs(h.to_matrix(s.effect.system, s.effect.coords) - bell_proj), 1e-12);
}

TEST(EntanglementSwap, QutritAndProduct) {
    auto q = quantum_model(3);
    const SwapResult s = entanglement_swap(*q, bell(*q, 3));
    EXPECT_NEAR(s.probability, 1.0 / 9.0, 1e-12);
    EXPECT_LT(s.residual, 1e-10);

    auto q2 = quantum_model(2);
    const auto &h = require_hilbert(*q2, "test");
    const CVec prod = linalg::kron(linalg::basis_ket(2, 0), CVec((linalg::basis_ket(2, 0) + linalg::basis_ket(2, 1)) / std::sqrt(2.0)));
    const SwapResult p = entanglement_swap(*q2, h.pure_state(q2->system({2, 2}), prod));
    EXPECT_NEAR(p.probability, 1.0, 1e-12);
    EXPECT_LT(p.residual, 1e-10);
}

TEST(EntanglementSwap, SchmidtFormulaAndBound) {
    Rng rng(3);
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        for (int d : {2, 3}) {
            auto m = make_model(id, d);
            const SystemLabel ab = m->system({d, d});
            for (int trial = 0; trial < (d == 2 ? 30 : 8); ++trial) {
                const StateVec psi{ab, m->random_pure_state(ab, rng)};
                const SwapResult s = entanglement_swap(*m, psi);
                EXPECT_LT(s.residual, 1e-10);
                // oracle: Schmidt coefficients are the eigenvalues of the marginal
                const auto &h = require_hilbert(*m, "test");
                const RVec marg = m->marginal(ab, psi.coords, std::vector<int>{0});
                double inv = 0.0;
                for (double l : oracle::hermitian_eigenvalues(h.to_matrix(m->atom(), marg))) inv += 1.0 / l;
                EXPECT_NEAR(s.probability, 1.0 / inv, 1e-9);
                EXPECT_LE(s.probability, 1.0 / m->atom().coord_dim + 1e-12);
                EXPECT_EQ(linalg::numerical_rank(h.to_matrix(s.effect.system, s.effect.coords)), 1);
                EXPECT_TRUE(m->is_effect(s.effect.system, s.effect.coords));
            }
        }
    }
}

TEST(EntanglementSwap, Rejections) {
    auto q = quantum_model(2);
    const SystemLabel ab = q->system({2, 2});
    EXPECT_THROW(entanglement_swap(*q, {ab, q->invariant_state(ab)}), ContractViolation);
    EXPECT_THROW(entanglement_swap(*q, bell(*q, 2), 0), ContractViolation);
    auto c = classical_model(2);
    EXPECT_THROW(entanglement_swap(*c, standard::basis_state(*c, c->system({2, 2}), 0)), Unsupported);
}

TEST(Transpose, IdentityAndPauliX) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    const LinearMap id = standard::unitary_channel(*q, a, CMat::Identity(2, 2));
    EXPECT_LT(max_diff(transpose_reversible(*q, id, fp).matrix, q->identity(a).matrix), 1e-12);
    // oracle: U^T conjugation by the matrix transpose
    const CMat y = oracle::pauli('Y');
    const LinearMap t = transpose_reversible(*q, standard::unitary_channel(*q, a, y), fp);
    const LinearMap expect = standard::unitary_channel(*q, a, CMat(y.transpose()));
    EXPECT_LT(max_diff(t.matrix, expect.matrix), 1e-12);
    EXPECT_EQ(t.tag, MapTag::Reversible);
}

TEST(Transpose, DefiningIdentityAndAntiHomomorphism) {
    Rng rng(5);
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        for (int d : {2, 3}) {
            auto m = make_model(id, d);
            auto a = m->atom();
            auto fp = faithful_pair(*m, a);
            for (int trial = 0; trial < 10; ++trial) {
                const LinearMap u1 = m->random_reversible(a, rng);
                const LinearMap u2 = m->random_reversible(a, rng);
                const LinearMap t1 = transpose_reversible(*m, u1, fp);
                const RVec left = m->apply(fp.psi.system, fp.psi.coords, u1, std::vector<int>{0}).coords.col(0);
                const Applied moved = m->apply(fp.psi.system, fp.psi.coords, t1, std::vector<int>{1});
                const RVec right = m->permute(moved.system, moved.coords, std::vector<int>{1, 0}).col(0);
                EXPECT_LT((left - right).cwiseAbs().maxCoeff(), 1e-11);
                const LinearMap t12 = transpose_reversible(*m, m->compose_seq(u1, u2), fp);
                const LinearMap t2t1 = m->compose_seq(transpose_reversible(*m, u2, fp), t1);
                EXPECT_LT(max_diff(t12.matrix, t2t1.matrix), 1e-11);
            }
        }
    }
}

TEST(Transpose, IsotropyOverHaarUnitaries) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const LinearMap u = standard::unitary_channel(*q, a, linalg::haar_unitary(2, rng));
        const LinearMap both = q->tensor(u, conjugate_reversible(*q, u, fp));
        const RVec out = both(fp.psi.coords);
        worst = std::max(worst, (out - fp.psi.coords).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-11);
}

TEST(Transpose, InjectiveOnSamples) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const CMat u = linalg::haar_unitary(2, rng);
        const CMat v = linalg::haar_unitary(2, rng);
        const double dist = oracle::unitary_diamond_distance(u, v);
        const LinearMap tu = transpose_reversible(*q, standard::unitary_channel(*q, a, u), fp);
        const LinearMap tv = transpose_reversible(*q, standard::unitary_channel(*q, a, v), fp);
        // the transposes differ by the same distance (U^T and V^T are related by transposition)
        EXPECT_NEAR(oracle::unitary_diamond_distance(u.transpose(), v.transpose()), dist, 1e-9);
        EXPECT_GT(max_diff(tu.matrix, tv.matrix), 1e-3 * dist);
    }
}

TEST(Transpose, RejectsNonReversible) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    EXPECT_THROW(transpose_reversible(*q, standard::depolarizing(*q, a, 0.3), fp), ContractViolation);
    EXPECT_THROW(conjugate_reversible(*q, standard::amplitude_damping(*q, a, 0.2), fp), ContractViolation);
}

TEST(Twirl, QubitPaulis) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const TwirlTest t = pauli_twirl(*q, a);
    ASSERT_EQ(t.unitaries.size(), 4u);
    EXPECT_LT(t.residual, 1e-12);
    EXPECT_LT(max_diff(t.unitaries[0].matrix, q->identity(a).matrix), 1e-12);
    // oracle: sum_P P rho P / 4 = I/2 on the matrix-unit basis
    std::vector<CMat> paulis;
    for (char c : {'I', 'X', 'Y', 'Z'}) paulis.push_back(oracle::pauli(c) / 2.0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const CMat e = linalg::ket_bra(linalg::basis_ket(2, i), linalg::basis_ket(2, j));
            const CMat out = oracle::kraus_apply(paulis, e);
            const CMat expect = (i == j ? 0.5 : 0.0) * CMat::Identity(2, 2);
            EXPECT_LT(linalg::max_abs(out - expect), 1e-12);
        }
    }
    // the Weyl set spans the same channels as the Paulis up to phase
    for (const auto &w : t.operators) {
        double best = 1.0;
        for (char c : {'I', 'X', 'Y', 'Z'}) best = std::min(best, 1.0 - std::abs((w.adjoint() * oracle::pauli(c)).trace()) / 2.0);
        EXPECT_LT(best, 1e-12);
    }
    for (double p : t.probabilities) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(Twirl, QutritAndInvariance) {
    for (int d : {3, 4}) {
        auto q = quantum_model(d);
        auto a = q->atom();
        const TwirlTest t = pauli_twirl(*q, a);
        EXPECT_EQ(t.unitaries.size(), static_cast<size_t>(d * d));
        EXPECT_LT(t.residual, 1e-12);
        Rng rng(d);
        for (int trial = 0; trial < 5; ++trial) {
            const LinearMap u = q->random_reversible(a, rng);
            EXPECT_LT(max_diff(q->compose_seq(u, t.channel).matrix, t.channel.matrix), 1e-10);
            EXPECT_LT(max_diff(q->compose_seq(t.channel, u).matrix, t.channel.matrix), 1e-10);
        }
    }
    auto r = real_quantum_model(2);
    EXPECT_THROW(pauli_twirl(*r, r->atom()), Unsupported);
    auto q2 = quantum_model(2);
    EXPECT_THROW(pauli_twirl(*q2, q2->trivial()), ContractViolation);
}

TEST(Teleport, QubitBellMeasurement) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const TeleportationRun run = deterministic_teleport(*q, a);
    ASSERT_EQ(run.effects.size(), 4u);
    double total = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(run.probabilities[i], 0.25);
        EXPECT_LT(run.residuals[i], 1e-10);
        total += run.probabilities[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_TRUE(run.effects_atomic);
    EXPECT_LT(run.normalization_residual, 1e-12);
    EXPECT_LT(run.marginal_residual, 1e-12);
    EXPECT_LT(run.twirl_residual, 1e-12);
    // oracle: the explicit Bell basis on (A~, A') sandwiches the same projectors
    const auto &h = require_hilbert(*q, "test");
    const CVec phi = linalg::max_entangled(2);
    std::vector<CVec> bells = {phi, oracle::kron(oracle::pauli('Z'), CMat::Identity(2, 2)) * phi,
                               oracle::kron(oracle::pauli('X'), CMat::Identity(2, 2)) * phi,
                               oracle::kron(oracle::pauli('Y'), CMat::Identity(2, 2)) * phi};
    for (const auto &b : bells) {
        const CMat proj = linalg::ket_bra(b, b);
        double best = 1.0;
        for (const auto &e : run.effects) best = std::min(best, linalg::max_abs(h.to_matrix(e.system, e.coords) - proj));
        EXPECT_LT(best, 1e-12);
    }
}

TEST(Teleport, QutritsAndOutcomeCount) {
    for (int d : {3, 4}) {
        auto q = quantum_model(d);
        auto a = q->atom();
        const TeleportationRun run = deterministic_teleport(*q, a);
        EXPECT_GE(static_cast<int>(run.effects.size()), a.coord_dim);
        for (double r : run.residuals) EXPECT_LT(r, 1e-10);
        EXPECT_LT(run.marginal_residual, 1e-12);
        EXPECT_LT(run.twirl_residual, 1e-12);
    }
}

TEST(Teleport, DenseCodingGram) {
    for (int d : {2, 3}) {
        auto q = quantum_model(d);
        const TeleportationRun run = deterministic_teleport(*q, q->atom());
        const RMat g = dense_coding_gram(*q, run);
        EXPECT_LT(max_diff(g, RMat::Identity(d * d, d * d)), 1e-12);
    }
}

TEST(Teleport, PerturbedCorrectionFails) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const TeleportationRun run = deterministic_teleport(*q, a);
    Rng rng(11);
    for (int i = 0; i < 4; ++i) {
        const LinearMap v = q->random_reversible(a, rng);
        const LinearMap wrong = q->compose_seq(v, run.corrections[i]);
        EXPECT_GE(teleport_residual(*q, run, i, wrong), 1e-3);
        // on states too
        double worst = 0.0;
        const LinearMap branch = q->compose_seq(wrong, teleport_branch(*q, run, i));
        for (int s = 0; s < 10; ++s) {
            const RVec rho = q->random_pure_state(a, rng);
            worst = std::max(worst, (branch(rho) / run.probabilities[i] - rho).cwiseAbs().maxCoeff());
        }
        EXPECT_GE(worst, 1e-3);
    }
}

TEST(Teleport, PlusStateProbability) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const TeleportationRun run = deterministic_teleport(*q, a);
    const auto &h = require_hilbert(*q, "test");
    const CVec plus = (linalg::basis_ket(2, 0) + linalg::basis_ket(2, 1)) / std::sqrt(2.0);
    const StateVec in = h.pure_state(a, plus);
    const EffectVec check{a, in.coords};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(teleport_probability(*q, run, i, in, check), 0.25, 1e-12);
}

TEST(Programming, OrthogonalProgramsExact) {
    Rng rng(1);
    const std::vector<CMat> us = {CMat::Identity(2, 2), oracle::pauli('X')};
    const std::vector<CVec> progs = {linalg::basis_ket(2, 0), linalg::basis_ket(2, 1)};
    const ProgrammingReport r = programming_demo(us, progs, rng);
    EXPECT_TRUE(r.orthogonal);
    EXPECT_TRUE(r.exact);
    EXPECT_LT(r.deficit, 1e-12);
    EXPECT_EQ(r.restarts, 0);
    // oracle: the retriever applied to rho (x) |1><1| gives X rho X
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    const CMat rho = linalg::random_density(2, 2, rng);
    const CMat in = oracle::kron(rho, CMat(linalg::ket_bra(progs[1], progs[1])));
    const RVec out = r.retriever(h.from_matrix(r.retriever.input, in));
    EXPECT_LT(linalg::max_abs(h.to_matrix(q->atom(), out) - us[1] * rho * us[1]), 1e-12);
}

TEST(Programming, ThreeUnitariesOnQutritProgram) {
    Rng rng(2);
    const std::vector<CMat> us = {oracle::pauli('X'), oracle::pauli('Y'), oracle::pauli('Z')};
    const std::vector<CVec> progs = {linalg::basis_ket(3, 0), linalg::basis_ket(3, 1), linalg::basis_ket(3, 2)};
    const ProgrammingReport r = programming_demo(us, progs, rng);
    EXPECT_TRUE(r.exact);
    for (double f : r.fidelities) EXPECT_NEAR(f, 1.0, 1e-12);
}

TEST(Programming, NonOrthogonalProgramsHaveDeficit) {
    Rng rng(3);
    const std::vector<CMat> us = {CMat::Identity(2, 2), oracle::pauli('X')};
    const CVec plus = (linalg::basis_ket(2, 0) + linalg::basis_ket(2, 1)) / std::sqrt(2.0);
    const ProgrammingReport r = programming_demo(us, {linalg::basis_ket(2, 0), plus}, rng, 50);
    EXPECT_FALSE(r.orthogonal);
    EXPECT_FALSE(r.exact);
    EXPECT_GT(r.deficit, 0.01);
    EXPECT_EQ(r.restarts, 50);
    // the search finds something better than ignoring the program
    EXPECT_LT(r.deficit, 0.5);
    auto q = quantum_model(2);
    EXPECT_EQ(check_channel(r.retriever, *q).verdict, ChannelClass::Channel);
}

TEST(Programming, SingleUnitary) {
    Rng rng(4);
    const ProgrammingReport r = programming_demo({oracle::pauli('Y')}, {linalg::basis_ket(2, 1)}, rng);
    EXPECT_TRUE(r.exact);
    EXPECT_LT(r.deficit, 1e-12);
}

TEST(Programming, Rejections) {
    Rng rng(5);
    EXPECT_THROW(programming_demo({CMat::Identity(2, 2)}, {}, rng), ContractViolation);
    EXPECT_THROW(programming_demo({CMat::Identity(2, 2), CMat::Identity(3, 3)},
                                  {linalg::basis_ket(2, 0), linalg::basis_ket(2, 1)}, rng),
                 ContractViolation);
    EXPECT_THROW(programming_demo({2.0 * CMat::Identity(2, 2)}, {linalg::basis_ket(2, 0)}, rng), ContractViolation);
}

}  // namespace
}  // namespace purelab
