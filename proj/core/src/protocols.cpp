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


#include "purelab/protocols.hpp"

#include <cmath>
#include <numeric>

#include "purelab/errors.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

std::vector<int> range(int from, int to) {
    std::vector<int> v(std::max(0, to - from));
    std::iota(v.begin(), v.end(), from);
    return v;
}

int count(const SystemLabel &s) { return static_cast<int>(s.factors.size()); }

CMat identity(Eigen::Index d) { return CMat::Identity(d, d); }

// The single Kraus operator of a reversible map, or ContractViolation.
CMat reversible_operator(const HilbertModel &h, const LinearMap &u, const char *what) {
    if (u.input != u.output) throw ContractViolation(std::string(what) + ": input and output differ");
    const auto kraus = h.minimal_kraus(u);
    if (kraus.size() != 1 || linalg::max_abs(kraus[0].adjoint() * kraus[0] - identity(kraus[0].cols())) > 1e-9) {
        throw ContractViolation(std::string(what) + ": map is not reversible");
    }
    return kraus[0];
}

CMat matrix_power(const CMat &x, int k) {
    CMat out = identity(x.rows());
    for (int i = 0; i < k; ++i) out = out * x;
    return out;
}

// Inverse square root on the support; the kernel projector goes to `kernel`.
CMat inverse_sqrt(const CMat &x, CMat &kernel) {
    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(x));
    const RVec &w = es.eigenvalues();
    const double cut = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
    RVec inv(w.size()), ker(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        inv(i) = w(i) > cut ? 1.0 / std::sqrt(w(i)) : 0.0;
        ker(i) = w(i) > cut ? 0.0 : 1.0;
    }
    const CMat &v = es.eigenvectors();
    kernel = v * ker.cast<cplx>().asDiagonal() * v.adjoint();
    return v * inv.cast<cplx>().asDiagonal() * v.adjoint();
}

double fidelity(const CMat &j, const CMat &omega) { return (j * omega).trace().real(); }

}  // namespace

SwapResult entanglement_swap(const TheoryModel &model, const StateVec &psi, int split) {
    const auto &h = require_hilbert(model, "entanglement_swap");
    const int n = count(psi.system);
    if (split <= 0 || split >= n) throw ContractViolation("entanglement_swap: split must leave both sides non-empty");
    if (!model.is_pure(psi.system, psi.coords)) throw ContractViolation("entanglement_swap: state is not pure");
    const SystemLabel a = model.subsystem(psi.system, range(0, split));
    const SystemLabel b = model.subsystem(psi.system, range(split, n));
    const int da = a.hilbert_dim();
    const int db = b.hilbert_dim();

    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(h.to_matrix(psi.system, psi.coords)));
    CVec v = es.eigenvectors().col(es.eigenvalues().size() - 1);
    if (h.is_real()) {
        // fix the global phase so the vector is real
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        v *= std::abs(v(k)) / v(k);
        v = v.real().cast<cplx>();
    }
    const CMat m = v.reshaped<Eigen::RowMajor>(da, db);
    RVec s;
    CMat u, w;
    if (h.is_real()) {
        Eigen::JacobiSVD<RMat> svd(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
        s = svd.singularValues();
        u = svd.matrixU().cast<cplx>();
        w = svd.matrixV().cast<cplx>();
    } else {
        Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        s = svd.singularValues();
        u = svd.matrixU();
        w = svd.matrixV();
    }
    // psi = sum_i s_i u_i (x) conj(w_i); the effect vector inverts the Schmidt weights
    CVec eta = CVec::Zero(static_cast<Eigen::Index>(db) * da);
    double inverse_weights = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= 1e-12 * s(0)) continue;
        eta += linalg::kron(CVec(w.col(i).conjugate()), CVec(u.col(i))) / s(i);
        inverse_weights += 1.0 / (s(i) * s(i));
    }
    eta /= std::sqrt(inverse_weights);

    SwapResult out;
    out.probability = 1.0 / inverse_weights;
    const SystemLabel inner = model.compose(b, a);
    out.effect = {inner, h.from_matrix(inner, linalg::ket_bra(eta, eta))};
    const SystemLabel joint = model.compose(psi.system, psi.system);
    const RVec both = model.embed_product(psi.system, psi.coords, psi.system, psi.coords);
    const Applied swapped = model.apply(joint, both, model.observe(out.effect), range(split, n + split));
    out.residual = (swapped.coords.col(0) - out.probability * psi.coords).cwiseAbs().maxCoeff();
    return out;
}

LinearMap inverse_reversible(const TheoryModel &model, const LinearMap &u) {
    const auto &h = require_hilbert(model, "inverse_reversible");
    const CMat k = reversible_operator(h, u, "inverse_reversible");
    return h.map_from_kraus(u.output, u.input, {k.adjoint()}, MapTag::Reversible);
}

LinearMap transpose_reversible(const TheoryModel &model, const LinearMap &u, const FaithfulPair &fp) {
    const auto &h = require_hilbert(model, "transpose_reversible");
    if (u.input != fp.system) throw ContractViolation("transpose_reversible: map does not act on the faithful pair");
    LinearMap with_kraus = u;
    with_kraus.kraus = std::vector<CMat>{reversible_operator(h, u, "transpose_reversible")};
    const ChoiState r = store(model, with_kraus, fp);
    const int na = count(fp.system);
    std::vector<int> perm = range(na, 2 * na);
    for (int k = 0; k < na; ++k) perm.push_back(k);
    const StateVec swapped{model.permuted(r.state.system, perm),
                           model.permute(r.state.system, r.state.coords, perm).col(0)};
    LinearMap t = retrieve(model, as_choi_state(model, swapped, fp), fp);
    t.tag = MapTag::Reversible;
    return t;
}

LinearMap conjugate_reversible(const TheoryModel &model, const LinearMap &u, const FaithfulPair &fp) {
    return inverse_reversible(model, transpose_reversible(model, u, fp));
}

TwirlTest pauli_twirl(const TheoryModel &model, const SystemLabel &a) {
    if (model.id() != TheoryId::Quantum) {
        throw Unsupported("pauli_twirl: the exact Weyl twirl is available in the quantum model only");
    }
    const auto &h = require_hilbert(model, "pauli_twirl");
    const int d = a.hilbert_dim();
    if (d < 2) throw ContractViolation("pauli_twirl: dimension must be at least 2");
    const CMat x = standard::weyl_shift(d);
    const CMat z = standard::weyl_clock(d);
    TwirlTest t;
    t.system = a;
    std::vector<CMat> kraus;
    for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
            const CMat w = matrix_power(x, p) * matrix_power(z, q);
            t.probabilities.push_back(1.0 / (static_cast<double>(d) * d));
            t.operators.push_back(w);
            t.unitaries.push_back(standard::unitary_channel(model, a, w));
            kraus.push_back(w / static_cast<double>(d));
        }
    }
    t.channel = h.map_from_kraus(a, a, std::move(kraus));
    const RMat target = model.invariant_state(a) * model.deterministic_effect(a).transpose();
    t.residual = (t.channel.matrix - target).cwiseAbs().maxCoeff();
    return t;
}

LinearMap teleport_branch(const TheoryModel &model, const TeleportationRun &run, int outcome) {
    const SystemLabel &a = run.pair.system;
    const LinearMap prep = model.tensor(model.prepare(run.pair.psi), model.identity(a));
    const LinearMap meas = model.tensor(model.identity(a), model.observe(run.effects.at(outcome)));
    return model.compose_seq(meas, prep);
}

double teleport_residual(const TheoryModel &model, const TeleportationRun &run, int outcome,
                         const LinearMap &correction) {
    const LinearMap m = model.compose_seq(correction, teleport_branch(model, run, outcome));
    const RMat id = RMat::Identity(m.matrix.rows(), m.matrix.cols());
    return (m.matrix / run.probabilities.at(outcome) - id).cwiseAbs().maxCoeff();
}

double teleport_probability(const TheoryModel &model, const TeleportationRun &run, int outcome,
                            const StateVec &input, const EffectVec &check) {
    const LinearMap m =
        model.compose_seq(run.corrections.at(outcome), teleport_branch(model, run, outcome));
    return pair(check, {m.output, m(input.coords)});
}

TeleportationRun deterministic_teleport(const TheoryModel &model, const SystemLabel &a) {
    TeleportationRun run;
    run.twirl = pauli_twirl(model, a);
    const auto &h = require_hilbert(model, "deterministic_teleport");
    run.pair = faithful_pair(model, a);
    const int d = a.hilbert_dim();
    const SystemLabel inner = model.compose(a, a);
    const CVec phi = linalg::max_entangled(d);
    run.effects_atomic = true;
    RVec total = -model.deterministic_effect(inner);
    for (size_t i = 0; i < run.twirl.operators.size(); ++i) {
        // (I (x) M) Phi = (M^T (x) I) Phi, so conj(W_i) on A~ leaves W_i on A
        const CVec beta = linalg::kron(CMat(run.twirl.operators[i].conjugate()), identity(d)) * phi;
        const CMat proj = linalg::ket_bra(beta, beta);
        run.effects.push_back({inner, h.from_matrix(inner, proj)});
        run.effects_atomic = run.effects_atomic && linalg::numerical_rank(proj) == 1;
        run.corrections.push_back(inverse_reversible(model, run.twirl.unitaries[i]));
        run.probabilities.push_back(run.twirl.probabilities[i]);
        total += run.effects.back().coords;
    }
    run.normalization_residual = total.cwiseAbs().maxCoeff();

    const RVec chi = model.invariant_state(a);
    const RVec e = model.deterministic_effect(a);
    RMat twirl = RMat::Zero(a.coord_dim, a.coord_dim);
    for (size_t i = 0; i < run.effects.size(); ++i) {
        run.residuals.push_back(teleport_residual(model, run, static_cast<int>(i), run.corrections[i]));
        for (int j = 0; j < a.coord_dim; ++j) {
            const RVec x = model.embed_product(a, chi, a, RVec::Unit(a.coord_dim, j));
            const double gap = run.effects[i].coords.dot(x) - run.probabilities[i] * e(j);
            run.marginal_residual = std::max(run.marginal_residual, std::abs(gap));
        }
        twirl += run.probabilities[i] * run.twirl.unitaries[i].matrix;
    }
    run.twirl_residual = (twirl - chi * e.transpose()).cwiseAbs().maxCoeff();
    return run;
}

RMat dense_coding_gram(const TheoryModel &model, const TeleportationRun &run) {
    const int na = count(run.pair.system);
    std::vector<RVec> states;
    for (const auto &u : run.twirl.unitaries) {
        states.push_back(model.apply(run.pair.psi.system, run.pair.psi.coords, u, range(0, na)).coords.col(0));
    }
    const auto n = static_cast<Eigen::Index>(states.size());
    RMat g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = states[i].dot(states[j]);
    }
    return g;
}

ProgrammingReport programming_demo(const std::vector<CMat> &unitaries, const std::vector<CVec> &programs, Rng &rng,
                                   int restarts) {
    const size_t n = unitaries.size();
    if (n == 0 || programs.size() != n) throw ContractViolation("programming_demo: need one program per unitary");
    const auto d = unitaries[0].rows();
    const auto dp = programs[0].size();
    for (size_t i = 0; i < n; ++i) {
        if (unitaries[i].rows() != d || unitaries[i].cols() != d || programs[i].size() != dp) {
            throw ContractViolation("programming_demo: dimension mismatch");
        }
        if (linalg::max_abs(unitaries[i].adjoint() * unitaries[i] - identity(d)) > 1e-9) {
            throw ContractViolation("programming_demo: operator is not unitary");
        }
        if (std::abs(programs[i].norm() - 1.0) > 1e-9) throw ContractViolation("programming_demo: program not normalized");
    }
    const auto din = d * dp;
    const double dd = static_cast<double>(d) * static_cast<double>(d);

    // F_i = tr(J Omega_i) with Omega_i = |U_i>><<U_i| (x) eta_i^T / d^2
    std::vector<CMat> omegas;
    CMat omega = CMat::Zero(d * din, d * din);
    for (size_t i = 0; i < n; ++i) {
        const CVec vu = unitaries[i].reshaped<Eigen::RowMajor>();
        const CMat eta = linalg::ket_bra(programs[i], programs[i]);
        omegas.push_back(linalg::kron(linalg::ket_bra(vu, vu), CMat(eta.transpose())) / dd);
        omega += omegas.back() / static_cast<double>(n);
    }

    ProgrammingReport rep;
    rep.orthogonal = true;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            rep.orthogonal = rep.orthogonal && std::abs(programs[i].dot(programs[j])) < 1e-10;
        }
    }

    CMat best;
    if (rep.orthogonal) {
        // controlled unitary: read the program in its basis, apply the matching U_i
        std::vector<CMat> kraus;
        CMat basis(dp, static_cast<Eigen::Index>(n));
        for (size_t i = 0; i < n; ++i) {
            basis.col(static_cast<Eigen::Index>(i)) = programs[i];
            kraus.push_back(linalg::kron(unitaries[i], CMat(programs[i].adjoint())));
        }
        const CMat full = linalg::complete_orthonormal(basis, static_cast<int>(dp));
        for (Eigen::Index k = static_cast<Eigen::Index>(n); k < dp; ++k) {
            kraus.push_back(linalg::kron(identity(d), CMat(full.col(k).adjoint())));
        }
        best = linalg::choi_from_kraus(kraus);
    } else {
        double best_f = -1.0;
        const std::vector<int> dims{static_cast<int>(d), static_cast<int>(din)};
        const std::vector<int> keep{1};
        for (int r = 0; r < restarts; ++r) {
            CMat j = linalg::choi_from_kraus(
                linalg::random_channel_kraus(static_cast<int>(din), static_cast<int>(d), static_cast<int>(din * d), rng));
            double f = fidelity(j, omega);
            for (int it = 0; it < 2000; ++it) {
                const CMat x = omega * j * omega;
                CMat kernel;
                const CMat s = linalg::kron(identity(d), inverse_sqrt(linalg::partial_trace(x, dims, keep), kernel));
                const CMat next = s * x * s + linalg::kron(identity(d) / static_cast<double>(d), kernel);
                const double fn = fidelity(next, omega);
                j = next;
                if (fn - f < 1e-14) {
                    f = std::max(f, fn);
                    break;
                }
                f = fn;
            }
            if (f > best_f) {
                best_f = f;
                best = j;
            }
        }
        rep.restarts = restarts;
    }

    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) {
        rep.fidelities.push_back(fidelity(best, omegas[i]));
        mean += rep.fidelities.back() / static_cast<double>(n);
        const CMat q = linalg::kron(identity(d * d), CMat(programs[i].transpose()));
        const CMat ji = q * best * q.adjoint();
        rep.residual = std::max(rep.residual, linalg::max_abs(ji - linalg::choi_from_kraus({unitaries[i]})));
    }
    rep.deficit = 1.0 - mean;
    rep.exact = rep.residual < 1e-10;
    const ModelPtr model = quantum_model(static_cast<int>(d));
    rep.retriever = require_hilbert(*model, "programming_demo")
                        .map_from_kraus(model->system({static_cast<int>(d), static_cast<int>(dp)}), model->atom(),
                                        linalg::kraus_from_choi(best, static_cast<int>(din), static_cast<int>(d)));
    return rep;
}

}  // namespace purelab
