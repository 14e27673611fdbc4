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
#include "purelab/axioms.hpp"
#include "purelab/errors.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

const std::vector<std::string> kIds = {"causality", "local_discriminability", "purification", "no_cloning"};

std::vector<std::string> labels(const AxiomReport &r) {
    std::vector<std::string> out;
    for (const auto &id : kIds) out.push_back(r.check(id).label);
    return out;
}

TEST(Causality, AllModels) {
    for (int d : {2, 3}) {
        for (auto id : {TheoryId::Quantum, TheoryId::RealQuantum}) {
            auto m = make_model(id, d);
            const CheckResult r = check_causality(*m, m->atom());
            EXPECT_EQ(r.verdict, Verdict::Holds);
            EXPECT_EQ(r.numbers.at("null_dim"), 0);
        }
    }
    for (int n = 2; n <= 5; ++n) {
        auto c = classical_model(n);
        EXPECT_EQ(check_causality(*c, c->atom()).verdict, Verdict::Holds);
    }
}

TEST(LocalDiscriminability, DimensionCounts) {
    auto q = quantum_model(2);
    CheckResult r = check_local_discriminability(*q, q->atom(), q->atom());
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_EQ(r.numbers.at("d_ab"), 16);
    auto rq = real_quantum_model(2);
    r = check_local_discriminability(*rq, rq->atom(), rq->atom());
    EXPECT_EQ(r.verdict, Verdict::Fails);
    EXPECT_EQ(r.numbers.at("d_ab"), 10);
    EXPECT_EQ(r.numbers.at("product"), 9);
    auto c = classical_model(2);
    r = check_local_discriminability(*c, c->atom(2), c->atom(3));
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_EQ(r.numbers.at("d_ab"), 6);
}

TEST(Purification, Verdicts) {
    Rng rng(0);
    auto q = quantum_model(2);
    const CheckResult rq = check_purification(*q, q->atom(), 50, rng);
    EXPECT_EQ(rq.verdict, Verdict::Holds);
    EXPECT_LT(rq.numbers.at("unitarity_residual"), 1e-8);
    auto r = real_quantum_model(2);
    EXPECT_EQ(check_purification(*r, r->atom(), 20, rng).verdict, Verdict::Holds);
    auto c = classical_model(2);
    const CheckResult rc = check_purification(*c, c->atom(), 5, rng);
    EXPECT_EQ(rc.verdict, Verdict::Fails);
    EXPECT_EQ(rc.numbers.at("mixed_marginals"), 0);
    EXPECT_THROW(check_purification(*q, q->atom(), 0, rng), ContractViolation);
}

TEST(NoCloning, Verdicts) {
    auto q = quantum_model(2);
    const CheckResult r = check_no_cloning(*q, q->atom());
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_LT(r.numbers.at("min_pair_success"), 1.0 - 1e-9);
    auto c = classical_model(3);
    const CheckResult rc = check_no_cloning(*c, c->atom());
    EXPECT_EQ(rc.label, "cloneable");
    EXPECT_EQ(rc.numbers.at("states"), 3);
    // a single state is always cloneable
    const CheckResult one = check_no_cloning(*q, q->atom(), {standard::basis_state(*q, q->atom(), 0)});
    EXPECT_EQ(one.label, "cloneable");
    // |0>, |1>, |+>, |-> are not jointly distinguishable
    const auto &h = require_hilbert(*q, "test");
    const CVec p = (linalg::basis_ket(2, 0) + linalg::basis_ket(2, 1)) / std::sqrt(2.0);
    const CVec mn = (linalg::basis_ket(2, 0) - linalg::basis_ket(2, 1)) / std::sqrt(2.0);
    const CheckResult four = check_no_cloning(*q, q->atom(),
                                              {h.pure_state(q->atom(), linalg::basis_ket(2, 0)),
                                               h.pure_state(q->atom(), linalg::basis_ket(2, 1)),
                                               h.pure_state(q->atom(), p), h.pure_state(q->atom(), mn)});
    EXPECT_EQ(four.verdict, Verdict::Holds);
    EXPECT_NEAR(four.numbers.at("min_pair_success"), 0.5 + std::sqrt(0.5) / 2.0, 1e-12);
}

TEST(MaxDistinguishable, Counts) {
    Rng rng(0);
    auto q2 = quantum_model(2);
    CheckResult r = check_max_distinguishable(*q2, q2->atom(), 50, rng);
    EXPECT_EQ(r.numbers.at("found"), 2);
    EXPECT_EQ(r.numbers.at("bound"), 4);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_LT(r.numbers.at("max_overlap"), 1e-10);
    auto q3 = quantum_model(3);
    r = check_max_distinguishable(*q3, q3->atom(), 50, rng);
    EXPECT_EQ(r.numbers.at("found"), 3);
    EXPECT_EQ(r.numbers.at("bound"), 9);
    auto c = classical_model(3);
    r = check_max_distinguishable(*c, c->atom(), 50, rng);
    EXPECT_EQ(r.numbers.at("found"), 3);
    EXPECT_EQ(r.verdict, Verdict::Fails);
}

TEST(NoInfoWithoutDisturbance, Instruments) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const auto &h = require_hilbert(*q, "test");
    auto scaled = [&](double w) { return h.map_from_kraus(a, a, {std::sqrt(w) * CMat::Identity(2, 2)}, MapTag::Transformation); };
    const CheckResult r = check_no_info_without_disturbance(*q, a, {scaled(0.3), scaled(0.7)});
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_NEAR(r.numbers.at("p0"), 0.3, 1e-12);
    EXPECT_NEAR(r.numbers.at("p1"), 0.7, 1e-12);

    // the Z-measurement instrument sums to dephasing
    std::vector<LinearMap> z;
    for (int k = 0; k < 2; ++k) {
        const CVec v = linalg::basis_ket(2, k);
        z.push_back(h.map_from_kraus(a, a, {linalg::ket_bra(v, v)}, MapTag::Transformation));
    }
    try {
        check_no_info_without_disturbance(*q, a, z);
        ADD_FAILURE() << "dephasing accepted as the identity";
    } catch (const DisturbingInstrument &e) {
        EXPECT_NEAR(e.residual, 1.0, 1e-12);
    }
    Rng rng(1);
    const LinearMap u = q->random_reversible(a, rng);
    LinearMap half = u;
    half.matrix *= 0.5;
    EXPECT_THROW(check_no_info_without_disturbance(*q, a, {half, half}), DisturbingInstrument);
}

TEST(Battery, VerdictMatrix) {
    const auto reports = run_battery({TheoryId::Quantum, TheoryId::Classical, TheoryId::RealQuantum}, {2, 2}, 0, 50);
    using V = std::vector<std::string>;
    EXPECT_EQ(labels(reports[0]), (V{"holds", "holds", "holds", "holds"}));
    EXPECT_EQ(labels(reports[1]), (V{"holds", "holds", "fails", "cloneable"}));
    EXPECT_EQ(labels(reports[2]), (V{"holds", "fails", "holds", "holds"}));
    EXPECT_EQ(reports[0].check("local_discriminability").numbers.at("d_ab"), 16);
    EXPECT_EQ(reports[2].check("local_discriminability").numbers.at("d_ab"), 10);
    EXPECT_EQ(reports[2].check("local_discriminability").numbers.at("product"), 9);
    for (const auto &r : reports) {
        EXPECT_TRUE(std::is_sorted(r.checks.begin(), r.checks.end(),
                                   [](const auto &x, const auto &y) { return x.id < y.id; }));
    }
}

TEST(Battery, StableAcrossSeedsAndDims) {
    for (auto id : {TheoryId::Quantum, TheoryId::Classical, TheoryId::RealQuantum}) {
        const auto base = labels(run_battery(id, {2, 2}, 0, 10));
        EXPECT_EQ(labels(run_battery(id, {2, 2}, 17, 10)), base);
        EXPECT_EQ(labels(run_battery(id, {2, 3}, 0, 10)), base);
        EXPECT_EQ(labels(run_battery(id, {3, 3}, 0, 10)), base);
    }
}

TEST(Battery, DeterministicReports) {
    const auto a = report_json(run_battery({TheoryId::Quantum, TheoryId::RealQuantum}, {2, 2}, 0, 10));
    const auto b = report_json(run_battery({TheoryId::Quantum, TheoryId::RealQuantum}, {2, 2}, 0, 10));
    EXPECT_EQ(a, b);
    const auto j = nlohmann::json::parse(a);
    EXPECT_EQ(j["axioms"][1]["theory"], "real-quantum");
    EXPECT_EQ(j["axioms"][1]["checks"][1]["id"], "local_discriminability");
    EXPECT_EQ(j["axioms"][1]["checks"][1]["numbers"]["d_ab"].get<double>(), 10.0);
    const std::string md = report_markdown({run_battery(TheoryId::RealQuantum, {2, 2}, 0, 5)});
    EXPECT_NE(md.find("fails (10 != 9)"), std::string::npos);
}

// Every failing verdict is re-derived from its witness alone.
TEST(Battery, WitnessReplay) {
    for (auto id : {TheoryId::Quantum, TheoryId::Classical, TheoryId::RealQuantum}) {
        for (int d : {2, 3}) {
            const AxiomReport rep = run_battery(id, {d, d}, 0, 10);
            auto m = make_model(id, d);
            for (const auto &c : rep.checks) {
                if (c.verdict != Verdict::Fails) continue;
                if (c.id == "local_discriminability") {
                    EXPECT_EQ(m->compose(m->atom(), m->atom()).coord_dim, c.numbers.at("d_ab"));
                    EXPECT_NE(c.numbers.at("d_ab"), c.numbers.at("product"));
                } else if (c.id == "purification") {
                    const SystemLabel aa = m->compose(m->atom(), m->atom());
                    EXPECT_EQ(aa.coord_dim, c.numbers.at("pure_composite_states"));
                    EXPECT_EQ(c.numbers.at("mixed_marginals"), 0);
                    EXPECT_THROW(m->purify(m->atom(), m->invariant_state(m->atom())), Error);
                } else if (c.id == "no_cloning") {
                    const auto states = m->spanning_states(m->atom());
                    EXPECT_EQ(static_cast<double>(states.size()), c.numbers.at("states"));
                    EXPECT_GE(c.numbers.at("min_pair_success"), 1.0 - 1e-9);
                } else if (c.id == "max_distinguishable") {
                    EXPECT_EQ(c.numbers.at("found"), m->atom().coord_dim);
                } else {
                    ADD_FAILURE() << "unexpected failing check " << c.id;
                }
            }
        }
    }
}

}  // namespace
}  // namespace purelab
