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

#include "json.hpp"
#include "oracles.hpp"
#include "purelab/choi.hpp"
#include "purelab/dilation.hpp"
#include "purelab/errors.hpp"
#include "purelab/metrology.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

double max_diff(const RMat &x, const RMat &y) { return (x - y).cwiseAbs().maxCoeff(); }

TEST(FaithfulPair, TeleportationProbability) {
    auto q2 = quantum_model(2);
    auto q3 = quantum_model(3);
    EXPECT_NEAR(faithful_pair(*q2, q2->atom()).probability, 0.25, 1e-12);
    EXPECT_NEAR(faithful_pair(*q3, q3->atom()).probability, 1.0 / 9.0, 1e-12);
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        for (int d : {2, 3, 4}) {
            auto m = make_model(id, d);
            auto fp = faithful_pair(*m, m->atom());
            EXPECT_LE(fp.probability, 1.0 / m->atom().coord_dim + 1e-12);
        }
    }
    auto c = classical_model(2);
    EXPECT_THROW(faithful_pair(*c, c->atom()), Unsupported);
}

TEST(FaithfulPair, TeleportationIdentity) {
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        for (int d : {2, 3}) {
            auto m = make_model(id, d);
            auto a = m->atom();
            auto fp = faithful_pair(*m, a);
            Rng rng(1);
            for (int trial = 0; trial < 10; ++trial) {
                const RVec rho = m->random_state(a, rng);
                const SystemLabel joint = m->compose(fp.psi.system, a);
                const RVec x = m->embed_product(fp.psi.system, fp.psi.coords, a, rho);
                const std::vector<int> inner = {1, 2};
                auto out = m->apply(joint, x, m->observe(fp.effect), inner);
                EXPECT_EQ(out.system, a);
                EXPECT_LT((out.coords.col(0) - fp.probability * rho).cwiseAbs().maxCoeff(), 1e-10);
            }
        }
    }
}

TEST(FaithfulPair, ProductRule) {
    auto q = quantum_model(2);
    auto a = q->atom(2);
    auto b = q->atom(3);
    auto ab = faithful_pair(*q, q->compose(a, b));
    auto fa = faithful_pair(*q, a);
    auto fb = faithful_pair(*q, b);
    const RVec product = q->embed_product(fa.psi.system, fa.psi.coords, fb.psi.system, fb.psi.coords);
    const std::vector<int> perm = {0, 2, 1, 3};
    const SystemLabel joint = q->compose(fa.psi.system, fb.psi.system);
    EXPECT_LT((q->permute(joint, product, perm).col(0) - ab.psi.coords).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ab.probability, fa.probability * fb.probability, 1e-15);
}

TEST(StoreRetrieve, IdentityStoresTheFaithfulState) {
    auto q = quantum_model(2);
    auto fp = faithful_pair(*q, q->atom());
    auto r = store(*q, q->identity(q->atom()), fp);
    EXPECT_LT((r.state.coords - fp.psi.coords).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StoreRetrieve, ChoiStateMatchesHandBuiltOperator) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(2);
    const auto kraus = linalg::random_channel_kraus(2, 3, 2, rng);
    auto c = h.map_from_kraus(a, q->atom(3), kraus);
    CMat expected = CMat::Zero(6, 6);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CMat e = CMat::Zero(2, 2);
            e(i, j) = 1.0;
            expected += oracle::kron(oracle::kraus_apply(kraus, e), e) / 2.0;
        }
    }
    auto r = store(*q, c, fp);
    EXPECT_LT(linalg::max_abs(h.to_matrix(r.state.system, r.state.coords) - expected), 1e-14);
}

TEST(StoreRetrieve, RandomRoundTrips) {
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 2);
        const auto &h = require_hilbert(*m, "test");
        auto a = m->atom();
        auto fp = faithful_pair(*m, a);
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            auto c = m->random_channel(a, m->atom(2 + trial % 2), rng);
            auto back = retrieve(*m, store(*m, c, fp), fp);
            EXPECT_LT(max_diff(back.matrix, c.matrix), 1e-12);
            EXPECT_EQ(back.tag, MapTag::Channel);
            EXPECT_LT(max_diff(h.map_from_kraus(a, back.output, *back.kraus).matrix, c.matrix), 1e-12);
        }
    }
}

TEST(StoreRetrieve, RejectsNonChoiStates) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    const RVec zero = h.pure_state(a, linalg::basis_ket(2, 0)).coords;
    const StateVec product{q->compose(a, a), q->embed_product(a, q->invariant_state(a), a, zero)};
    EXPECT_THROW(retrieve(*q, as_choi_state(*q, product, fp), fp), NotAChoiState);
    StateVec negative = fp.psi;
    negative.coords *= -1.0;
    EXPECT_THROW(retrieve(*q, as_choi_state(*q, negative, fp), fp), NotAChoiState);
}

TEST(StoreRetrieve, InstrumentCondition) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto kraus = linalg::random_channel_kraus(2, 2, 3, rng);
        std::vector<ChoiState> family;
        for (const auto &k : kraus) family.push_back(store(*q, h.map_from_kraus(a, a, {k}, MapTag::Transformation), fp));
        EXPECT_LT(instrument_residual(*q, family, fp), 1e-10);
        std::vector<LinearMap> branches;
        for (const auto &r : family) branches.push_back(retrieve(*q, r, fp));
        EXPECT_NO_THROW(purelab::Test(*q, {"0", "1", "2"}, branches));

        family[0].state.coords *= 0.9;
        family[0].marginal *= 0.9;
        EXPECT_GT(instrument_residual(*q, family, fp), 1e-4);
        branches[0] = retrieve(*q, family[0], fp);
        EXPECT_THROW(purelab::Test(*q, {"0", "1", "2"}, branches), ContractViolation);
    }
}

TEST(StoreRetrieve, DistanceBound) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(5);
    NormBudget budget;
    budget.restarts = 3;
    for (int trial = 0; trial < 10; ++trial) {
        auto c0 = q->random_channel(a, a, rng);
        auto c1 = q->random_channel(a, a, rng);
        LinearMap delta = c1;
        delta.matrix -= c0.matrix;
        delta.kraus.reset();
        const auto r0 = store(*q, c0, fp);
        const auto r1 = store(*q, c1, fp);
        const double lower = transformation_norm(*q, delta, budget).lower_bound;
        const double bound = state_norm(*q, r0.state.system, r1.state.coords - r0.state.coords) / fp.probability;
        EXPECT_LE(lower, bound + 1e-9);
    }
}

TEST(StoreRetrieve, AtomicMapsHavePureChoiStates) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kraus = linalg::random_channel_kraus(2, 2, 2, rng);
        auto atomic = store(*q, h.map_from_kraus(a, a, {kraus[0]}, MapTag::Transformation), fp);
        auto mixed = store(*q, h.map_from_kraus(a, a, kraus), fp);
        EXPECT_TRUE(q->is_pure(atomic.state.system, atomic.state.coords));
        EXPECT_FALSE(q->is_pure(mixed.state.system, mixed.state.coords));
    }
}

TEST(Link, Examples) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(7);
    auto c = q->random_channel(a, a, rng);
    const auto rc = store(*q, c, fp);
    const auto ri = store(*q, q->identity(a), fp);
    EXPECT_LT((link(*q, ri, rc).state.coords - rc.state.coords).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((link(*q, rc, ri).state.coords - rc.state.coords).cwiseAbs().maxCoeff(), 1e-12);

    const StateVec s1{a, q->random_state(a, rng)};
    const StateVec s2{q->atom(3), q->random_state(q->atom(3), rng)};
    const StateVec joined = link(*q, s1, s2, {});
    EXPECT_EQ(joined.system, q->compose(s2.system, s1.system));
    EXPECT_LT((joined.coords - q->embed_product(s2.system, s2.coords, a, s1.coords)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Link, HomomorphismOnRandomPairs) {
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 2);
        auto a = m->atom();
        auto b = m->atom(3);
        auto fa = faithful_pair(*m, a);
        auto fb = faithful_pair(*m, b);
        Rng rng(8);
        for (int trial = 0; trial < 100; ++trial) {
            auto c = m->random_channel(a, b, rng);
            auto d = m->random_channel(b, a, rng);
            const auto linked = link(*m, store(*m, c, fa), store(*m, d, fb));
            const auto direct = store(*m, m->compose_seq(d, c), fa);
            EXPECT_LT((linked.state.coords - direct.state.coords).cwiseAbs().maxCoeff(), 1e-10);
            EXPECT_TRUE(m->in_state_cone(linked.state.system, linked.state.coords, 1e-9));
        }
    }
}

TEST(Link, Bilinear) {
    auto q = quantum_model(2);
    auto a = q->atom();
    auto fp = faithful_pair(*q, a);
    Rng rng(9);
    const auto r1 = store(*q, q->random_channel(a, a, rng), fp);
    const auto r2 = store(*q, q->random_channel(a, a, rng), fp);
    const auto r3 = store(*q, q->random_channel(a, a, rng), fp);
    const std::vector<std::pair<int, int>> pairs = {{0, 1}};
    StateVec mix = r1.state;
    mix.coords = 0.3 * r1.state.coords - 1.7 * r2.state.coords;
    const RVec lhs = link(*q, mix, r3.state, pairs).coords;
    const RVec rhs =
        0.3 * link(*q, r1.state, r3.state, pairs).coords - 1.7 * link(*q, r2.state, r3.state, pairs).coords;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EntanglementBreaking, IdentityViolatesPpt) {
    auto q = quantum_model(2);
    auto r = is_entanglement_breaking(*q, q->identity(q->atom()));
    EXPECT_EQ(r.verdict, EbVerdict::NotEntanglementBreaking);
    // oracle: partial transpose of |Phi+><Phi+| is SWAP/2
    CMat swap = CMat::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 0.5;
    EXPECT_NEAR(oracle::hermitian_eigenvalues(swap).front(), -0.5, 1e-12);
    EXPECT_NEAR(r.min_partial_transpose_eigenvalue, -0.5, 1e-12);
}

TEST(EntanglementBreaking, MeasureAndPrepareChannels) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const auto povm_kraus = linalg::random_channel_kraus(2, 2, 3, rng);
        std::vector<EffectVec> povm;
        std::vector<StateVec> states;
        for (const auto &k : povm_kraus) {
            povm.push_back({a, h.from_matrix(a, k.adjoint() * k)});
            states.push_back({a, q->random_state(a, rng)});
        }
        auto mp = measure_and_prepare(*q, povm, states);
        EXPECT_EQ(mp.tag, MapTag::Channel);
        EXPECT_LT(max_diff(h.map_from_kraus(a, a, *mp.kraus).matrix, mp.matrix), 1e-12);
        EXPECT_EQ(is_entanglement_breaking(*q, mp).verdict, EbVerdict::EntanglementBreaking);
    }
}

TEST(EntanglementBreaking, DepolarizingAndDephasingWitnesses) {
    auto q = quantum_model(2);
    auto a = q->atom();
    for (const auto &c : {standard::depolarizing(*q, a, 1.0), standard::dephasing(*q, a)}) {
        EXPECT_EQ(is_entanglement_breaking(*q, c).verdict, EbVerdict::EntanglementBreaking);
        auto w = is_entanglement_breaking(*q, c, EbMethod::MeasurePrepareWitness);
        ASSERT_EQ(w.verdict, EbVerdict::EntanglementBreaking);
        EXPECT_LT(max_diff(measure_and_prepare(*q, w.povm, w.states).matrix, c.matrix), 1e-12);
    }
    auto w = is_entanglement_breaking(*q, q->identity(a), EbMethod::MeasurePrepareWitness);
    EXPECT_EQ(w.verdict, EbVerdict::Inconclusive);
}

TEST(EntanglementBreaking, PptBeyondExactDimensions) {
    auto q = quantum_model(3);
    auto a = q->atom();
    EXPECT_EQ(is_entanglement_breaking(*q, q->identity(a)).verdict, EbVerdict::NotEntanglementBreaking);
    EXPECT_EQ(is_entanglement_breaking(*q, standard::depolarizing(*q, a, 1.0)).verdict, EbVerdict::Inconclusive);
}

// Complement of rho -> sum_i <f_i|rho|f_i> s_i with Kraus |s_i><f_i|:
// rho -> sum_{k,l} <f_k|rho|f_l> <s_l|s_k> |k><l|.
std::vector<EffectVec> projective(const HilbertModel &h, const SystemLabel &a, const CMat &f) {
    std::vector<EffectVec> povm;
    for (int i = 0; i < 2; ++i) povm.push_back({a, h.from_matrix(a, linalg::ket_bra(f.col(i), f.col(i)))});
    return povm;
}

TEST(EntanglementBreaking, ComplementWithOrthogonalPreparationsIsSeparable) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const CMat s = linalg::haar_unitary(2, rng);
        const std::vector<StateVec> states = {h.pure_state(a, s.col(0)), h.pure_state(a, s.col(1))};
        auto comp = complementary_channel(*q, measure_and_prepare(*q, projective(h, a, linalg::haar_unitary(2, rng)), states));
        ASSERT_EQ(comp.output.hilbert_dim(), 2);
        EXPECT_EQ(is_entanglement_breaking(*q, comp).verdict, EbVerdict::EntanglementBreaking);
    }
}

TEST(EntanglementBreaking, ComplementWithIdenticalPreparationsIsUnitary) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    auto a = q->atom();
    Rng rng(12);
    const CMat f = linalg::haar_unitary(2, rng);
    const StateVec s = h.pure_state(a, linalg::random_pure(2, rng));
    auto mp = measure_and_prepare(*q, projective(h, a, f), {s, s});
    EXPECT_EQ(is_entanglement_breaking(*q, mp).verdict, EbVerdict::EntanglementBreaking);
    auto comp = complementary_channel(*q, mp);
    EXPECT_EQ(is_entanglement_breaking(*q, comp).verdict, EbVerdict::NotEntanglementBreaking);
    // rho -> F^dagger rho F up to a unitary on the environment: a single Kraus operator
    EXPECT_EQ(stinespring(*q, comp).environment.hilbert_dim(), 1);
}

// (I_{B1} (x) S2)(S1 (x) I_{A2}) for random S1: A1 -> B1 M and S2: M A2 -> B2.
LinearMap random_comb(const TheoryModel &m, int memory, Rng &rng) { return random_two_step_comb(m, 2, memory, rng); }

TEST(CausalOrder, Examples) {
    auto q = quantum_model(2);
    auto a = q->atom();
    Rng rng(12);
    auto d1 = q->random_channel(a, a, rng);
    auto d2 = q->random_channel(a, a, rng);
    auto product = check_causal_order(*q, q->tensor(d1, d2), 1, 1);
    EXPECT_TRUE(product.ordered);
    EXPECT_LT(max_diff(product.reduced.matrix, d1.matrix), 1e-12);

    auto swap = check_causal_order(*q, standard::swap(*q, a, a), 1, 1);
    EXPECT_FALSE(swap.ordered);
    EXPECT_GT(swap.residual, 0.1);

    for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(check_causal_order(*q, random_comb(*q, 2, rng), 1, 1).ordered);
}

TEST(Comb, SingleStepIsStinespring) {
    auto q = quantum_model(2);
    Rng rng(13);
    auto c = q->random_channel(q->atom(), q->atom(), rng);
    auto comb = comb_decompose(*q, c, {1}, {1});
    ASSERT_EQ(comb.steps.size(), 1u);
    EXPECT_TRUE(comb.memory_dims.empty());
    EXPECT_EQ(static_cast<int>(comb.steps[0].kraus->size()), stinespring(*q, c).environment.hilbert_dim());
    EXPECT_LT(comb.residual, 1e-10);
}

TEST(Comb, RandomTwoStepCombsAreRecovered) {
    for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
        auto m = make_model(id, 2);
        Rng rng(14);
        for (int trial = 0; trial < 20; ++trial) {
            auto c = random_comb(*m, 2, rng);
            auto comb = comb_decompose(*m, c, {1, 1}, {1, 1});
            EXPECT_LT(comb.residual, 1e-8);
            EXPECT_LT(max_diff(recompose(*m, comb).matrix, c.matrix), 1e-8);
            ASSERT_EQ(comb.memory_dims.size(), 1u);
            EXPECT_GE(comb.memory_dims[0], 1);
        }
    }
}

TEST(Comb, ThreeSteps) {
    auto q = quantum_model(2);
    const auto &h = require_hilbert(*q, "test");
    Rng rng(15);
    auto a = q->atom();
    auto mem = q->atom(2);
    auto s1 = h.map_from_kraus(a, q->compose(a, mem), linalg::random_channel_kraus(2, 4, 2, rng));
    auto s2 = h.map_from_kraus(q->compose(mem, a), q->compose(a, mem), linalg::random_channel_kraus(4, 4, 2, rng));
    auto s3 = h.map_from_kraus(q->compose(mem, a), a, linalg::random_channel_kraus(4, 2, 2, rng));
    auto c = q->compose_seq(q->tensor(q->identity(a), s2), q->tensor(s1, q->identity(a)));
    c = q->tensor(c, q->identity(a));
    c = q->compose_seq(q->tensor(q->identity(q->system({2, 2})), s3), c);
    auto comb = comb_decompose(*q, c, {1, 1, 1}, {1, 1, 1});
    EXPECT_EQ(comb.steps.size(), 3u);
    EXPECT_LT(comb.residual, 1e-8);
}

TEST(Comb, ProductChannelsNeedNoMemory) {
    auto q = quantum_model(2);
    auto a = q->atom();
    Rng rng(16);
    auto c = q->tensor(q->random_channel(a, a, rng), q->random_channel(a, a, rng));
    auto comb = comb_decompose(*q, c, {1, 1}, {1, 1});
    EXPECT_EQ(comb.memory_dims, std::vector<int>{1});
    EXPECT_LT(comb.residual, 1e-8);
}

TEST(Comb, SwapIsRejectedAtTheFirstCut) {
    auto q = quantum_model(2);
    try {
        comb_decompose(*q, standard::swap(*q, q->atom(), q->atom()), {1, 1}, {1, 1});
        ADD_FAILURE() << "swap was decomposed";
    } catch (const CausalOrderViolation &err) {
        EXPECT_EQ(err.cut, 0);
        EXPECT_GT(err.residual, 0.1);
    }
}

TEST(ChoiPayload, CarriesFaithfulPairMetadata) {
    auto q = quantum_model(2);
    auto fp = faithful_pair(*q, q->atom());
    Rng rng(17);
    auto r = store(*q, q->random_channel(q->atom(), q->atom(), rng), fp);
    auto p = parse_payload(dump_payload(choi_payload(r, fp)));
    EXPECT_EQ(p.coords, r.state.coords);
    auto meta = nlohmann::json::parse(p.metadata.at("faithful_pair"));
    EXPECT_EQ(meta.at("d").get<int>(), 2);
    EXPECT_EQ(meta.at("probability").get<double>(), 0.25);
}

}  // namespace
}  // namespace purelab
