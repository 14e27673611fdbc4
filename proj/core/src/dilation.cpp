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


#include "purelab/dilation.hpp"

#include <numeric>
#include <string>

#include "purelab/errors.hpp"

namespace purelab {
namespace {

std::vector<int> leading(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// In the real model numerical linear algebra on real data may leave rounding-level
// imaginary parts; they are dropped so real-only constructors accept the result.
CMat realify(const HilbertModel &h, const CMat &x) { return h.is_real() ? CMat(x.real().cast<cplx>()) : x; }

CMat vectorized_kraus(const std::vector<CMat> &kraus) {
    const auto rows = kraus.at(0).rows();
    const auto cols = kraus[0].cols();
    CMat out(rows * cols, static_cast<Eigen::Index>(kraus.size()));
    for (size_t k = 0; k < kraus.size(); ++k) {
        for (Eigen::Index b = 0; b < rows; ++b) {
            for (Eigen::Index a = 0; a < cols; ++a) out(b * cols + a, static_cast<Eigen::Index>(k)) = kraus[k](b, a);
        }
    }
    return out;
}

}  // namespace

Purification purify(const TheoryModel &model, const StateVec &rho, int pad_to) {
    const SystemLabel &a = rho.system;
    if (!model.in_state_cone(a, rho.coords, 1e-9)) throw ContractViolation("purify: input is not a state");
    const double norm = model.deterministic_effect(a).dot(rho.coords);
    if (std::abs(norm - 1.0) > 1e-9) throw ContractViolation("purify: state is not normalized");
    Purified raw = model.purify(a, rho.coords, pad_to);
    Purification p;
    p.original = rho;
    p.pure = {raw.joint, raw.coords};
    p.purifying = raw.purifying;
    const std::vector<int> tail = {static_cast<int>(a.factors.size())};
    p.complementary = {raw.purifying, model.marginal(raw.joint, raw.coords, tail)};
    p.psi = std::move(raw.psi);
    return p;
}

Test steering_test(const TheoryModel &model, const Purification &p, const std::vector<StateVec> &ensemble,
                   double tol) {
    if (ensemble.empty()) throw ContractViolation("steering_test: empty ensemble");
    const SystemLabel &a = p.original.system;
    RVec total = RVec::Zero(a.coord_dim);
    for (const auto &s : ensemble) {
        if (s.system != a) throw ContractViolation("steering_test: ensemble member on the wrong system");
        total += s.coords;
    }
    if ((total - p.original.coords).cwiseAbs().maxCoeff() > tol) {
        throw ContractViolation("steering_test: ensemble does not sum to the purified state");
    }
    const SystemLabel &t = p.purifying;
    std::vector<RVec> effects;
    if (p.psi.size() == 0) {
        // pure classical state: every member is a multiple of it
        for (const auto &s : ensemble) {
            const double w = model.deterministic_effect(a).dot(s.coords);
            if ((s.coords - w * p.original.coords).cwiseAbs().maxCoeff() > tol) {
                throw ContractViolation("steering_test: ensemble member is not dominated by the state");
            }
            effects.push_back(w * model.deterministic_effect(t));
        }
    } else {
        const auto &h = require_hilbert(model, "steering_test");
        const int d = a.hilbert_dim();
        const int r = t.hilbert_dim();
        CMat m(d, r);
        for (int i = 0; i < d; ++i) {
            for (int k = 0; k < r; ++k) m(i, k) = p.psi(i * r + k);
        }
        const CMat mp = linalg::pinv(m);
        CMat sum = CMat::Zero(r, r);
        std::vector<CMat> bs;
        for (const auto &s : ensemble) {
            const CMat x = h.to_matrix(a, s.coords);
            const CMat bt = mp * x * mp.adjoint();
            if (linalg::max_abs(m * bt * m.adjoint() - x) > 1e-8 || !h.in_state_cone(t, h.from_matrix(t, bt), tol)) {
                throw ContractViolation("steering_test: ensemble member is not dominated by the state");
            }
            bs.push_back(bt.transpose());
            sum += bs.back();
        }
        bs.back() += CMat::Identity(r, r) - sum;
        for (const auto &b : bs) effects.push_back(h.from_matrix(t, linalg::hermitian_part(b)));
    }
    std::vector<std::string> labels;
    std::vector<LinearMap> branches;
    for (size_t i = 0; i < effects.size(); ++i) {
        labels.push_back(std::to_string(i));
        branches.push_back(model.observe({t, effects[i]}));
    }
    return Test(model, std::move(labels), std::move(branches), 1e-8);
}

bool equal_upon_input(const TheoryModel &model, const LinearMap &a1, const LinearMap &a2, const StateVec &rho,
                      double tol) {
    if (a1.input != a2.input || a1.output != a2.output || a1.input != rho.system) {
        throw ContractViolation("equal_upon_input: maps and state disagree on systems");
    }
    if (model.id() == TheoryId::Classical) {
        for (Eigen::Index i = 0; i < rho.coords.size(); ++i) {
            if (rho.coords(i) <= tol) continue;
            if ((a1.matrix.col(i) - a2.matrix.col(i)).cwiseAbs().maxCoeff() > tol) return false;
        }
        return true;
    }
    if (model.id() == TheoryId::RealQuantum) {
        auto single = [](const LinearMap &m) { return m.kraus && m.kraus->size() == 1; };
        if (!single(a1) && !single(a2)) {
            throw Unsupported("equal_upon_input: the real-quantum model needs one map to be reversible");
        }
    }
    const Purification p = purify(model, rho);
    const auto positions = leading(static_cast<int>(rho.system.factors.size()));
    const Applied x1 = model.apply(p.pure.system, p.pure.coords, a1, positions);
    const Applied x2 = model.apply(p.pure.system, p.pure.coords, a2, positions);
    return (x1.coords - x2.coords).cwiseAbs().maxCoeff() <= tol;
}

Dilation dilation_from_kraus(const TheoryModel &model, const LinearMap &channel, const std::vector<CMat> &kraus) {
    const auto &h = require_hilbert(model, "dilation");
    Dilation d;
    d.channel = channel;
    d.environment = model.atom(static_cast<int>(kraus.size()));
    d.isometry = realify(h, linalg::isometry_from_kraus(kraus));
    const auto n = d.isometry.cols();
    d.isometry_residual = linalg::max_abs(d.isometry.adjoint() * d.isometry - CMat::Identity(n, n));
    if (d.isometry_residual > 1e-8) throw ContractViolation("dilation: Kraus operators do not form a channel");
    d.lift = h.map_from_kraus(channel.input, model.compose(channel.output, d.environment), {d.isometry},
                              MapTag::Channel);
    return d;
}

Dilation stinespring(const TheoryModel &model, const LinearMap &channel, int env_dim) {
    const auto &h = require_hilbert(model, "stinespring");
    if (check_channel(channel, model).verdict != ChannelClass::Channel) {
        throw ContractViolation("stinespring: input is not a channel");
    }
    auto kraus = h.minimal_kraus(channel);
    const CMat zero = CMat::Zero(kraus[0].rows(), kraus[0].cols());
    while (static_cast<int>(kraus.size()) < env_dim) kraus.push_back(zero);
    return dilation_from_kraus(model, channel, kraus);
}

ReversibleForm reversible_form(const TheoryModel &model, const Dilation &d) {
    const auto &h = require_hilbert(model, "reversible_form");
    const int da = d.channel.input.hilbert_dim();
    const int db = d.channel.output.hilbert_dim();
    const int e = d.environment.hilbert_dim();
    int padded = e;
    while ((db * padded) % da != 0) ++padded;
    const int e0 = db * padded / da;
    CMat v = CMat::Zero(static_cast<Eigen::Index>(db) * padded, da);
    for (int b = 0; b < db; ++b) {
        for (int k = 0; k < e; ++k) v.row(b * padded + k) = d.isometry.row(b * e + k);
    }
    const CMat q = realify(h, linalg::complete_orthonormal(v, db * padded));
    CMat u(q.rows(), q.cols());
    int next = da;
    for (int a = 0; a < da; ++a) {
        u.col(a * e0) = v.col(a);
        for (int j = 1; j < e0; ++j) u.col(a * e0 + j) = q.col(next++);
    }
    ReversibleForm f;
    f.padded_environment = model.atom(padded);
    f.ancilla = h.pure_state(model.atom(e0), linalg::basis_ket(e0, 0));
    f.unitary = u;
    return f;
}

Connection connect_dilations(const TheoryModel &model, const Dilation &d1, const Dilation &d2, double tol) {
    const auto &h = require_hilbert(model, "connect_dilations");
    if (d1.channel.input != d2.channel.input || d1.channel.output != d2.channel.output) {
        throw ContractViolation("connect_dilations: dilations of maps with different signatures");
    }
    const int da = d1.channel.input.hilbert_dim();
    const int db = d1.channel.output.hilbert_dim();
    const int e1 = d1.environment.hilbert_dim();
    const int e2 = d2.environment.hilbert_dim();
    const auto k1 = linalg::kraus_from_isometry(d1.isometry, db, e1);
    const auto k2 = linalg::kraus_from_isometry(d2.isometry, db, e2);
    const double distance =
        linalg::trace_norm(linalg::choi_from_kraus(k1) - linalg::choi_from_kraus(k2)) / static_cast<double>(da);
    if (distance > tol) {
        throw NotSameChannel("connect_dilations: the dilations reduce to different channels (distance " +
                                 std::to_string(distance) + ")",
                             distance);
    }
    Connection c;
    c.w = realify(h, (linalg::pinv(vectorized_kraus(k1)) * vectorized_kraus(k2)).transpose());
    c.residual = linalg::max_abs(d2.isometry - linalg::kron(CMat(CMat::Identity(db, db)), c.w) * d1.isometry);

    // w^dagger w is the projector onto the span used by V1; the rest is sent to |0>.
    std::vector<CMat> kraus = {c.w};
    const CMat gap = CMat::Identity(e1, e1) - c.w.adjoint() * c.w;
    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(gap));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k) <= 1e-10) continue;
        kraus.push_back(realify(
            h, std::sqrt(es.eigenvalues()(k)) * linalg::basis_ket(e2, 0) * es.eigenvectors().col(k).adjoint()));
    }
    c.map = h.map_from_kraus(d1.environment, d2.environment, std::move(kraus), MapTag::Channel);
    return c;
}

LinearMap complementary_channel(const TheoryModel &model, const Dilation &d) {
    const auto &h = require_hilbert(model, "complementary_channel");
    const int da = d.channel.input.hilbert_dim();
    const int db = d.channel.output.hilbert_dim();
    const int e = d.environment.hilbert_dim();
    const auto k = linalg::kraus_from_isometry(d.isometry, db, e);
    std::vector<CMat> r(db, CMat::Zero(e, da));
    for (int b = 0; b < db; ++b) {
        for (int i = 0; i < e; ++i) r[b].row(i) = k[i].row(b);
    }
    return h.map_from_kraus(d.channel.input, d.environment, std::move(r), MapTag::Channel);
}

LinearMap complementary_channel(const TheoryModel &model, const LinearMap &channel) {
    return complementary_channel(model, stinespring(model, channel));
}

TestDilation dilate_test(const TheoryModel &model, const Test &test) {
    const auto &h = require_hilbert(model, "dilate_test");
    std::vector<CMat> all;
    std::vector<std::pair<int, int>> blocks;
    for (const auto &branch : test.branches()) {
        const auto k = h.minimal_kraus(branch);
        blocks.emplace_back(static_cast<int>(all.size()), static_cast<int>(k.size()));
        all.insert(all.end(), k.begin(), k.end());
    }
    TestDilation t;
    t.dilation = dilation_from_kraus(model, test.channel(model), all);
    t.outcomes = test.outcomes();
    const int e = static_cast<int>(all.size());
    for (const auto &[start, count] : blocks) {
        CMat proj = CMat::Zero(e, e);
        for (int i = start; i < start + count; ++i) proj(i, i) = 1.0;
        t.readout.push_back({t.dilation.environment, h.from_matrix(t.dilation.environment, proj)});
    }
    return t;
}

}  // namespace purelab
