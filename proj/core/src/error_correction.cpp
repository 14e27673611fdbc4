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


#include "purelab/error_correction.hpp"

#include <cmath>
#include <numeric>

#include "purelab/dilation.hpp"
#include "purelab/errors.hpp"
#include "purelab/standard.hpp"

namespace purelab {
namespace {

std::vector<int> range(int from, int to) {
    std::vector<int> v(std::max(0, to - from));
    std::iota(v.begin(), v.end(), from);
    return v;
}

CMat identity(Eigen::Index d) { return CMat::Identity(d, d); }

std::pair<RVec, CMat> eig(const CMat &x, bool real) {
    if (real) {
        Eigen::SelfAdjointEigenSolver<RMat> es(linalg::hermitian_part(x).real());
        return {es.eigenvalues(), es.eigenvectors().cast<cplx>()};
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(x));
    return {es.eigenvalues(), es.eigenvectors()};
}

void check_kraus(const std::vector<CMat> &kraus, int din, int dout) {
    if (kraus.empty()) throw ContractViolation("error correction: empty Kraus list");
    CMat total = CMat::Zero(din, din);
    for (const auto &k : kraus) {
        if (k.rows() != dout || k.cols() != din) throw ContractViolation("error correction: Kraus operator has the wrong shape");
        total += k.adjoint() * k;
    }
    if (linalg::max_abs(total - identity(din)) > 1e-9) {
        throw ContractViolation("error correction: Kraus operators are not trace preserving");
    }
}

CodeSpec make_spec(const TheoryModel &model, const LinearMap &channel, const StateVec &rho, const CMat &projector) {
    const auto &h = require_hilbert(model, "error correction");
    if (rho.system != channel.input) throw ContractViolation("error correction: state does not live on the channel input");
    CodeSpec spec;
    spec.rho = rho;
    spec.projector = projector;
    spec.channel = channel;
    spec.kraus = h.kraus_of(channel);
    check_kraus(spec.kraus, channel.input.hilbert_dim(), channel.output.hilbert_dim());
    spec.channel.kraus = spec.kraus;
    return spec;
}

// Polar unitary of a square matrix.
CMat polar_unitary(const CMat &x) {
    Eigen::JacobiSVD<CMat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double unitarity_defect(const std::vector<CMat> &f, int d) {
    double worst = 0.0;
    for (const auto &k : f) {
        const double w = k.squaredNorm() / d;
        worst = std::max(worst, linalg::max_abs(k.adjoint() * k - w * identity(d)));
    }
    return worst;
}

std::vector<CMat> rotate(const CMat &u, const std::vector<CMat> &kraus) {
    std::vector<CMat> out;
    for (Eigen::Index k = 0; k < u.rows(); ++k) {
        CMat f = CMat::Zero(kraus[0].rows(), kraus[0].cols());
        for (Eigen::Index l = 0; l < u.cols(); ++l) f += u(k, l) * kraus[static_cast<size_t>(l)];
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

std::string to_string(OneWayVerdict v) {
    switch (v) {
        case OneWayVerdict::OneWay:
            return "one-way";
        case OneWayVerdict::NotOneWay:
            return "not-one-way";
        case OneWayVerdict::Inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

CodeSpec code_for_state(const TheoryModel &model, const LinearMap &channel, const StateVec &rho) {
    const auto &h = require_hilbert(model, "code_for_state");
    const CMat m = h.to_matrix(rho.system, rho.coords);
    return make_spec(model, channel, rho, linalg::positive_projector(m, 1e-10));
}

CodeSpec code_for_projector(const TheoryModel &model, const LinearMap &channel, const CMat &projector) {
    const auto &h = require_hilbert(model, "code_for_projector");
    const int d = channel.input.hilbert_dim();
    if (projector.rows() != d || projector.cols() != d) throw ContractViolation("code_for_projector: size mismatch");
    if (linalg::max_abs(projector * projector - projector) > 1e-10 ||
        linalg::max_abs(projector - projector.adjoint()) > 1e-10) {
        throw ContractViolation("code_for_projector: not an orthogonal projector");
    }
    const double rank = projector.trace().real();
    if (rank < 0.5) throw ContractViolation("code_for_projector: empty code");
    const StateVec rho = h.state_from_matrix(channel.input, projector / rank);
    return make_spec(model, channel, rho, projector);
}

CorrectionResult is_correctable(const TheoryModel &model, const CodeSpec &spec, double tol) {
    const auto &h = require_hilbert(model, "is_correctable");
    const auto &k = spec.kraus;
    const CMat &p = spec.projector;
    const auto n = static_cast<Eigen::Index>(k.size());
    const double rank = p.trace().real();

    CorrectionResult res;
    res.kl_matrix = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const CMat block = p * k[i].adjoint() * k[j] * p;
            const cplx lambda = block.trace() / rank;
            res.kl_matrix(i, j) = lambda;
            const double r = linalg::max_abs(block - lambda * p);
            if (r > res.kl_residual || res.witness.first < 0) {
                res.kl_residual = std::max(res.kl_residual, r);
                res.witness = {static_cast<int>(i), static_cast<int>(j)};
            }
        }
    }
    res.correctable = res.kl_residual <= tol;

    // reference/environment factorization of (V (x) I) Psi_rho
    const Purification pur = purify(model, spec.rho);
    const int db = spec.channel.output.hilbert_dim();
    const int de = static_cast<int>(n);
    const int dr = pur.purifying.hilbert_dim();
    const CVec out = linalg::kron(linalg::isometry_from_kraus(k), CMat(identity(dr))) * pur.psi;
    const std::vector<int> dims{db, de, dr};
    const std::vector<int> keep_er{1, 2};
    const CMat er = linalg::partial_trace(linalg::ket_bra(out, out), dims, keep_er);
    const std::vector<int> pair_dims{de, dr};
    const std::vector<int> keep_e{0}, keep_r{1};
    const CMat sigma = linalg::partial_trace(er, pair_dims, keep_e);
    const CMat ref = linalg::partial_trace(er, pair_dims, keep_r);
    res.factorization_residual = linalg::max_abs(er - linalg::kron(sigma, ref));
    res.factorized = res.factorization_residual <= tol;

    if (!res.correctable) return res;

    // standard recovery: diagonalize lambda, then undo each polar part on the code
    const auto [vals, vecs] = eig(res.kl_matrix, h.is_real());
    const int din = spec.channel.input.hilbert_dim();
    const double top = std::max(vals.maxCoeff(), 0.0);
    std::vector<CMat> rec;
    CMat covered = CMat::Zero(db, db);
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
        if (vals(c) <= 1e-12 * std::max(top, 1.0)) continue;
        CMat f = CMat::Zero(db, din);
        for (Eigen::Index i = 0; i < n; ++i) f += vecs(i, c) * k[i];
        rec.push_back(p * f.adjoint() / std::sqrt(vals(c)));
        covered += f * p * f.adjoint() / vals(c);
    }
    const auto [rest_vals, rest_vecs] = eig(identity(db) - covered, h.is_real());
    const CVec anchor = linalg::basis_ket(din, 0);
    for (Eigen::Index c = 0; c < rest_vals.size(); ++c) {
        if (rest_vals(c) > 0.5) rec.push_back(linalg::ket_bra(anchor, CVec(rest_vecs.col(c))));
    }
    res.recovery = h.map_from_kraus(spec.channel.output, spec.channel.input, std::move(rec));
    const LinearMap rc = model.compose_seq(*res.recovery, spec.channel);
    const Applied back =
        model.apply(pur.pure.system, pur.pure.coords, rc, range(0, static_cast<int>(spec.rho.system.factors.size())));
    res.end_to_end_residual = (back.coords.col(0) - pur.pure.coords).cwiseAbs().maxCoeff();
    res.recovers_upon_input = equal_upon_input(model, rc, model.identity(spec.rho.system), spec.rho, tol);
    return res;
}

DeletionResult is_deletion(const TheoryModel &model, const LinearMap &channel, const StateVec &rho, double tol) {
    if (rho.system != channel.input) throw ContractViolation("is_deletion: state does not live on the channel input");
    std::vector<RVec> span;
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        const CMat p = linalg::positive_projector(h->to_matrix(rho.system, rho.coords), 1e-10);
        for (const auto &b : hermitian_basis(rho.system.hilbert_dim(), h->is_real())) {
            const CMat x = p * b * p;
            if (linalg::max_abs(x) > 1e-12) span.push_back(h->from_matrix(rho.system, x));
        }
    } else {
        for (Eigen::Index i = 0; i < rho.coords.size(); ++i) {
            if (rho.coords(i) > 1e-10) span.push_back(RVec::Unit(rho.coords.size(), i));
        }
    }
    DeletionResult res;
    const RVec out = channel(rho.coords);
    const double norm = model.deterministic_effect(channel.output).dot(out);
    if (norm <= 1e-12) throw ContractViolation("is_deletion: the channel annihilates rho");
    res.sigma = {channel.output, out / norm};
    const RVec e = model.deterministic_effect(rho.system);
    for (const auto &tau : span) {
        const RVec gap = channel(tau) - e.dot(tau) * res.sigma.coords;
        res.residual = std::max(res.residual, gap.cwiseAbs().maxCoeff());
    }
    res.deletion = res.residual <= tol;
    return res;
}

ComplementarityReport complementarity_check(const TheoryModel &model, const LinearMap &channel, const StateVec &rho) {
    ComplementarityReport rep;
    rep.correctable = is_correctable(model, code_for_state(model, channel, rho)).correctable;
    rep.complement = complementary_channel(model, channel);
    rep.complement_deletion = is_deletion(model, rep.complement, rho).deletion;
    rep.forward_holds = !rep.correctable || rep.complement_deletion;
    rep.converse_holds = !rep.complement_deletion || rep.correctable;
    rep.converse_expected = model.id() == TheoryId::Quantum;
    return rep;
}

CounterexampleReport real_deletion_counterexample() {
    const ModelPtr m = real_quantum_model(2);
    const auto &h = require_hilbert(*m, "real_deletion_counterexample");
    const SystemLabel a = m->atom();
    const double s = 1.0 / std::sqrt(2.0);
    // rows b * 2 + e; V|0> = Phi+, V|1> = Psi-
    CMat v = CMat::Zero(4, 2);
    v(0, 0) = s;
    v(3, 0) = s;
    v(1, 1) = s;
    v(2, 1) = -s;
    const CMat swapped = linalg::permutation_unitary(std::vector<int>{2, 2}, std::vector<int>{1, 0}) * v;

    CounterexampleReport rep;
    rep.channel = h.map_from_kraus(a, a, linalg::kraus_from_isometry(v, 2, 2));
    rep.complement = h.map_from_kraus(a, a, linalg::kraus_from_isometry(swapped, 2, 2));
    const RVec chi = m->invariant_state(a);
    for (const RVec &x : m->spanning_states(a)) {
        rep.channel_marginal_residual =
            std::max(rep.channel_marginal_residual, (rep.channel(x) - chi).cwiseAbs().maxCoeff());
        rep.complement_marginal_residual =
            std::max(rep.complement_marginal_residual, (rep.complement(x) - chi).cwiseAbs().maxCoeff());
    }
    const StateVec rho{a, chi};
    rep.channel_deletion = is_deletion(*m, rep.channel, rho).deletion;
    rep.complement_deletion = is_deletion(*m, rep.complement, rho).deletion;
    rep.channel_correctable = is_correctable(*m, code_for_state(*m, rep.channel, rho)).correctable;
    rep.converse_fails = rep.complement_deletion && !rep.channel_correctable;
    return rep;
}

OneWayResult one_way_correct(const TheoryModel &model, const LinearMap &channel, const StateVec &rho, Rng &rng,
                             int budget) {
    if (model.id() != TheoryId::Quantum) throw Unsupported("one_way_correct: quantum model only");
    const auto &h = require_hilbert(model, "one_way_correct");
    if (channel.input != channel.output || rho.system != channel.input) {
        throw ContractViolation("one_way_correct: expects a channel A -> A and a state on A");
    }
    const int d = channel.input.hilbert_dim();
    OneWayResult res;
    const RVec spectrum = eig(h.to_matrix(rho.system, rho.coords), false).first;
    res.internal_state = spectrum.minCoeff() > 1e-10;

    const std::vector<CMat> kraus = h.minimal_kraus(channel);
    CMat unital = -identity(d);
    for (const auto &k : kraus) unital += k * k.adjoint();
    // a mixture of unitaries is unital, so a gap is a certificate
    if (linalg::max_abs(unital) > 1e-9) {
        res.verdict = OneWayVerdict::NotOneWay;
        res.residual = linalg::max_abs(unital);
        return res;
    }

    const int r = static_cast<int>(kraus.size());
    std::vector<int> sizes{r};
    if (d * d > r) sizes.push_back(d * d);
    res.residual = std::numeric_limits<double>::infinity();
    std::vector<CMat> found;
    for (int count : sizes) {
        std::vector<CMat> padded = kraus;
        padded.resize(static_cast<size_t>(count), CMat::Zero(d, d));
        for (int attempt = 0; attempt < budget && found.empty(); ++attempt) {
            ++res.attempts;
            CMat u = attempt == 0 ? identity(count) : linalg::haar_unitary(count, rng);
            for (int it = 0; it < 300; ++it) {
                const std::vector<CMat> f = rotate(u, padded);
                const double defect = unitarity_defect(f, d);
                res.residual = std::min(res.residual, defect);
                if (defect < 1e-10) {
                    found = f;
                    break;
                }
                // Procrustes step towards the nearest set of scaled unitaries
                CMat a(count, count);
                for (int k = 0; k < count; ++k) {
                    const CMat t = std::sqrt(f[k].squaredNorm() / d) * polar_unitary(f[k]);
                    for (int l = 0; l < count; ++l) a(l, k) = (t.adjoint() * padded[static_cast<size_t>(l)]).trace();
                }
                Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
                u = svd.matrixV() * svd.matrixU().adjoint();
            }
        }
        if (!found.empty()) break;
    }
    if (found.empty()) {
        res.verdict = OneWayVerdict::Inconclusive;
        return res;
    }
    res.verdict = OneWayVerdict::OneWay;
    for (const auto &f : found) {
        const double p = f.squaredNorm() / d;
        if (p < 1e-12) continue;
        const CMat u = f / std::sqrt(p);
        res.probabilities.push_back(p);
        res.unitaries.push_back(u);
        res.recoveries.push_back(h.map_from_kraus(channel.input, channel.input, {u.adjoint()}, MapTag::Reversible));
    }
    return res;
}

}  // namespace purelab
