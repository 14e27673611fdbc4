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


#include "purelab/choi.hpp"

#include <numeric>

#include "json.hpp"
#include "purelab/errors.hpp"

namespace purelab {
namespace {

std::vector<int> range(int from, int to) {
    std::vector<int> v(std::max(0, to - from));
    std::iota(v.begin(), v.end(), from);
    return v;
}

int count(const SystemLabel &s) { return static_cast<int>(s.factors.size()); }

std::pair<RVec, CMat> eig(const CMat &x, bool real) {
    if (real) {
        Eigen::SelfAdjointEigenSolver<RMat> es(linalg::hermitian_part(x).real());
        return {es.eigenvalues(), es.eigenvectors().cast<cplx>()};
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(x));
    return {es.eigenvalues(), es.eigenvectors()};
}

// Choi operator of a channel on (out) (x) (x_dim * rest) compared with J_D (x) I_rest.
double factor_residual(const CMat &j, int rest, CMat &reduced) {
    const auto n = j.rows() / rest;
    reduced = CMat::Zero(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            for (int r = 0; r < rest; ++r) reduced(p, q) += j(p * rest + r, q * rest + r);
        }
    }
    reduced /= static_cast<double>(rest);
    return linalg::max_abs(j - linalg::kron(reduced, CMat(CMat::Identity(rest, rest))));
}

CMat vectorized(const std::vector<CMat> &kraus) {
    const auto rows = kraus.at(0).rows();
    const auto cols = kraus[0].cols();
    CMat out(rows * cols, static_cast<Eigen::Index>(kraus.size()));
    for (size_t k = 0; k < kraus.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = kraus[k].reshaped<Eigen::RowMajor>();
    }
    return out;
}

SystemLabel part(const TheoryModel &model, const SystemLabel &s, int from, int to) {
    const auto keep = range(from, to);
    return model.subsystem(s, keep);
}

}  // namespace

std::string to_string(EbVerdict v) {
    switch (v) {
        case EbVerdict::EntanglementBreaking:
            return "entanglement-breaking";
        case EbVerdict::NotEntanglementBreaking:
            return "not-entanglement-breaking";
        case EbVerdict::Inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

FaithfulPair faithful_pair(const TheoryModel &model, const SystemLabel &a) {
    const auto &h = require_hilbert(model, "faithful_pair");
    const int d = a.hilbert_dim();
    FaithfulPair fp;
    fp.system = a;
    fp.purifying = a;
    const SystemLabel joint = model.compose(a, a);
    fp.psi = h.pure_state(joint, linalg::max_entangled(d));
    fp.effect = {joint, fp.psi.coords};
    fp.probability = 1.0 / (static_cast<double>(d) * d);
    return fp;
}

ChoiState store(const TheoryModel &model, const LinearMap &c, const FaithfulPair &fp) {
    if (c.input != fp.system) throw ContractViolation("store: map input does not match the faithful pair");
    const Applied out = model.apply(fp.psi.system, fp.psi.coords, c, range(0, count(c.input)));
    return as_choi_state(model, {out.system, out.coords.col(0)}, fp);
}

ChoiState as_choi_state(const TheoryModel &model, const StateVec &r, const FaithfulPair &fp) {
    const int nb = count(r.system) - count(fp.purifying);
    if (nb < 0) throw ContractViolation("as_choi_state: state is smaller than the purifying system");
    ChoiState cs;
    cs.state = r;
    cs.input = fp.system;
    cs.output = part(model, r.system, 0, nb);
    if (model.compose(cs.output, fp.purifying) != r.system) {
        throw ContractViolation("as_choi_state: trailing factors do not match the purifying system");
    }
    cs.marginal = model.marginal(r.system, r.coords, range(nb, count(r.system)));
    return cs;
}

LinearMap retrieve(const TheoryModel &model, const ChoiState &r, const FaithfulPair &fp, double tol) {
    const auto &h = require_hilbert(model, "retrieve");
    const SystemLabel &a = fp.system;
    const int nb = count(r.output);
    const int na = count(a);
    if (r.input != a || r.state.system != model.compose(r.output, fp.purifying)) {
        throw ContractViolation("retrieve: Choi state and faithful pair disagree on systems");
    }
    if (!model.in_state_cone(r.state.system, r.state.coords, tol)) {
        throw NotAChoiState("retrieve: the vector is not a state");
    }
    const RVec chi = model.marginal(fp.psi.system, fp.psi.coords, range(na, 2 * na));
    const RVec gap = chi - r.marginal;
    if (!model.in_state_cone(fp.purifying, gap, tol)) {
        throw NotAChoiState("retrieve: the marginal on the purifying system exceeds the faithful state's");
    }
    // teleport every basis element of S_R(A) into R and rescale by 1/p
    const SystemLabel with_input = model.compose(r.state.system, a);
    RMat joint(with_input.coord_dim, a.coord_dim);
    for (int j = 0; j < a.coord_dim; ++j) {
        joint.col(j) = model.embed_product(r.state.system, r.state.coords, a, RVec::Unit(a.coord_dim, j));
    }
    const Applied out =
        model.apply(with_input, joint, model.observe(fp.effect), range(nb, nb + 2 * na));
    LinearMap m;
    m.input = a;
    m.output = r.output;
    m.matrix = out.coords / fp.probability;
    const bool normalized = gap.cwiseAbs().maxCoeff() <= tol;
    m.tag = normalized ? MapTag::Channel : MapTag::Transformation;
    const CMat j = static_cast<double>(a.hilbert_dim()) * h.to_matrix(r.state.system, r.state.coords);
    m.kraus = linalg::kraus_from_choi(j, a.hilbert_dim(), r.output.hilbert_dim(), 1e-12, h.is_real());
    return m;
}

double instrument_residual(const TheoryModel &model, const std::vector<ChoiState> &family, const FaithfulPair &fp) {
    const int na = count(fp.system);
    RVec total = -model.marginal(fp.psi.system, fp.psi.coords, range(na, 2 * na));
    for (const auto &r : family) total += r.marginal;
    return total.cwiseAbs().maxCoeff();
}

StateVec link(const TheoryModel &model, const StateVec &r1, const StateVec &r2,
              const std::vector<std::pair<int, int>> &pairs) {
    const int n2 = count(r2.system);
    const SystemLabel joint = model.compose(r2.system, r1.system);
    const RVec coords = model.embed_product(r2.system, r2.coords, r1.system, r1.coords);
    if (pairs.empty()) return {joint, coords};
    std::vector<int> positions, dims;
    int total = 1;
    for (const auto &[i1, i2] : pairs) {
        if (i1 < 0 || i1 >= count(r1.system) || i2 < 0 || i2 >= n2) throw ContractViolation("link: bad factor index");
        if (r1.system.factors[i1] != r2.system.factors[i2]) throw ContractViolation("link: contracted factors differ");
        positions.push_back(i2);
        dims.push_back(r2.system.factors[i2]);
        total *= dims.back();
    }
    for (const auto &pr : pairs) positions.push_back(n2 + pr.first);
    std::vector<int> both = dims;
    both.insert(both.end(), dims.begin(), dims.end());
    const FaithfulPair fp = faithful_pair(model, model.system(dims));
    const Applied out = model.apply(joint, coords, model.observe({model.system(both), fp.effect.coords}), positions);
    return {out.system, out.coords.col(0) / fp.probability};
}

ChoiState link(const TheoryModel &model, const ChoiState &rc, const ChoiState &rd) {
    if (rd.input != rc.output) throw ContractViolation("link: output of the first map is not the input of the second");
    const int nb = count(rc.output);
    const int nc = count(rd.output);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < nb; ++k) pairs.emplace_back(k, nc + k);
    const StateVec joined = link(model, rc.state, rd.state, pairs);
    ChoiState out;
    out.state = joined;
    out.input = rc.input;
    out.output = rd.output;
    out.marginal = model.marginal(joined.system, joined.coords, range(nc, count(joined.system)));
    return out;
}

EbResult is_entanglement_breaking(const TheoryModel &model, const LinearMap &c, EbMethod method) {
    const auto &h = require_hilbert(model, "is_entanglement_breaking");
    const int din = c.input.hilbert_dim();
    const int dout = c.output.hilbert_dim();
    const CMat j = h.choi(c) / static_cast<double>(din);
    EbResult r;
    if (method == EbMethod::Ppt) {
        CMat pt(j.rows(), j.cols());
        for (int b = 0; b < dout; ++b) {
            for (int a = 0; a < din; ++a) {
                for (int b2 = 0; b2 < dout; ++b2) {
                    for (int a2 = 0; a2 < din; ++a2) pt(b * din + a, b2 * din + a2) = j(b * din + a2, b2 * din + a);
                }
            }
        }
        r.min_partial_transpose_eigenvalue = eig(pt, false).first.minCoeff();
        if (r.min_partial_transpose_eigenvalue < -1e-10) {
            r.verdict = EbVerdict::NotEntanglementBreaking;
        } else {
            r.verdict = din * dout <= 6 ? EbVerdict::EntanglementBreaking : EbVerdict::Inconclusive;
        }
        return r;
    }
    const std::vector<int> dims = {dout, din};
    const std::vector<int> keep_out = {0}, keep_in = {1};
    const CMat v = eig(linalg::partial_trace(j, dims, keep_out), h.is_real()).second;
    const CMat u = eig(linalg::partial_trace(j, dims, keep_in), h.is_real()).second;
    const CMat basis = linalg::kron(v, u);
    CMat rotated = basis.adjoint() * j * basis;
    const RVec diag = rotated.diagonal().real();
    rotated.diagonal().setZero();
    if (linalg::max_abs(rotated) > 1e-10) return r;
    // J = sum_{a,b} w_ba |v_b><v_b| (x) |u_a><u_a|, so C(rho) = sum_a <conj(u_a)|rho|conj(u_a)> sigma_a
    for (int a = 0; a < din; ++a) {
        CMat sigma = CMat::Zero(dout, dout);
        double weight = 0.0;
        for (int b = 0; b < dout; ++b) {
            const double w = diag(b * din + a) * din;
            sigma += w * linalg::ket_bra(v.col(b), v.col(b));
            weight += w;
        }
        if (weight <= 1e-14) continue;
        const CVec ua = u.col(a).conjugate();
        r.povm.push_back({c.input, h.from_matrix(c.input, weight * linalg::ket_bra(ua, ua))});
        r.states.push_back(h.state_from_matrix(c.output, sigma / weight));
    }
    r.verdict = EbVerdict::EntanglementBreaking;
    return r;
}

LinearMap measure_and_prepare(const TheoryModel &model, const std::vector<EffectVec> &povm,
                              const std::vector<StateVec> &states) {
    if (povm.empty() || povm.size() != states.size()) {
        throw ContractViolation("measure_and_prepare: need one state per effect");
    }
    const SystemLabel in = povm[0].system;
    const SystemLabel out = states[0].system;
    LinearMap m;
    m.input = in;
    m.output = out;
    m.matrix = RMat::Zero(out.coord_dim, in.coord_dim);
    RVec total = RVec::Zero(in.coord_dim);
    for (size_t i = 0; i < povm.size(); ++i) {
        if (povm[i].system != in || states[i].system != out) throw ContractViolation("measure_and_prepare: mixed systems");
        m.matrix += states[i].coords * povm[i].coords.transpose();
        total += povm[i].coords;
    }
    const bool complete = (total - model.deterministic_effect(in)).cwiseAbs().maxCoeff() <= 1e-9;
    m.tag = complete ? MapTag::Channel : MapTag::Transformation;
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        std::vector<CMat> kraus;
        for (size_t i = 0; i < povm.size(); ++i) {
            const auto [sv, sq] = eig(h->to_matrix(out, states[i].coords), h->is_real());
            const auto [av, aq] = eig(h->to_matrix(in, povm[i].coords), h->is_real());
            for (Eigen::Index s = 0; s < sv.size(); ++s) {
                for (Eigen::Index t = 0; t < av.size(); ++t) {
                    if (sv(s) <= 1e-14 || av(t) <= 1e-14) continue;
                    kraus.push_back(std::sqrt(sv(s) * av(t)) * linalg::ket_bra(sq.col(s), aq.col(t)));
                }
            }
        }
        if (kraus.empty()) kraus.push_back(CMat::Zero(out.hilbert_dim(), in.hilbert_dim()));
        m.kraus = std::move(kraus);
    }
    return m;
}

CausalOrder check_causal_order(const TheoryModel &model, const LinearMap &c, int in_split, int out_split,
                               double tol) {
    if (in_split < 0 || in_split > count(c.input) || out_split < 0 || out_split > count(c.output)) {
        throw ContractViolation("check_causal_order: split outside the system");
    }
    const SystemLabel a1 = part(model, c.input, 0, in_split);
    const SystemLabel a2 = part(model, c.input, in_split, count(c.input));
    const SystemLabel b1 = part(model, c.output, 0, out_split);
    const SystemLabel b2 = part(model, c.output, out_split, count(c.output));
    const LinearMap kept = model.compose_seq(model.tensor(model.identity(b1), model.discard(b2)), c);
    CausalOrder r;
    r.reduced = model.compose_seq(
        kept, model.tensor(model.identity(a1), model.prepare({a2, model.invariant_state(a2)})));
    r.residual = (kept.matrix - model.tensor(r.reduced, model.discard(a2)).matrix).cwiseAbs().maxCoeff();
    r.ordered = r.residual <= tol;
    return r;
}

CombDecomposition comb_decompose(const TheoryModel &model, const LinearMap &c, const std::vector<int> &in_parts,
                                 const std::vector<int> &out_parts, double tol) {
    const auto &h = require_hilbert(model, "comb_decompose");
    const int n = static_cast<int>(in_parts.size());
    if (n == 0 || out_parts.size() != in_parts.size() ||
        std::accumulate(in_parts.begin(), in_parts.end(), 0) != count(c.input) ||
        std::accumulate(out_parts.begin(), out_parts.end(), 0) != count(c.output)) {
        throw ContractViolation("comb_decompose: parts do not cover the input and output factors");
    }
    std::vector<SystemLabel> as, bs;
    for (int k = 0, ia = 0, ib = 0; k < n; ++k) {
        as.push_back(part(model, c.input, ia, ia + in_parts[k]));
        bs.push_back(part(model, c.output, ib, ib + out_parts[k]));
        ia += in_parts[k];
        ib += out_parts[k];
    }
    const bool real = h.is_real();
    CMat w = linalg::isometry_from_kraus(h.minimal_kraus(c));
    CombDecomposition comb;
    int memory = 1;
    for (int k = 0; k + 1 < n; ++k) {
        const int ak = as[k].hilbert_dim(), bk = bs[k].hilbert_dim();
        int arest = 1, brest = 1;
        for (int j = k + 1; j < n; ++j) {
            arest *= as[j].hilbert_dim();
            brest *= bs[j].hilbert_dim();
        }
        const auto env = static_cast<int>(w.rows()) / (bk * brest);
        const auto current = linalg::kraus_from_isometry(w, bk, brest * env);
        CMat jd;
        const double residual = factor_residual(linalg::choi_from_kraus(current), arest, jd);
        if (residual > tol) {
            throw CausalOrderViolation("comb_decompose: signalling across cut " + std::to_string(k), k, residual);
        }
        const auto dk = linalg::kraus_from_choi(jd, memory * ak, bk, 1e-12, real);
        const int mem = static_cast<int>(dk.size());
        // Kraus family of V_k (x) I_rest, indexed by (mu, r)
        std::vector<CMat> lifted;
        for (const auto &kr : dk) {
            for (int r = 0; r < arest; ++r) {
                lifted.push_back(linalg::kron(kr, CMat(linalg::basis_ket(arest, r).adjoint())));
            }
        }
        CMat next = (linalg::pinv(vectorized(lifted)) * vectorized(current)).transpose();
        if (real) next = next.real().cast<cplx>();
        // does the rest of the comb read the memory at all?
        const auto tail = linalg::kraus_from_isometry(next, brest, env);
        const CMat jn = linalg::choi_from_kraus(tail);
        CMat ignore = CMat::Zero(jn.rows(), jn.cols());
        {
            // J''' is the mu = mu' = 0 block in (b, mu, r) ordering
            CMat jr = CMat::Zero(brest * arest, brest * arest);
            for (int b = 0; b < brest; ++b) {
                for (int r = 0; r < arest; ++r) {
                    for (int b2 = 0; b2 < brest; ++b2) {
                        for (int r2 = 0; r2 < arest; ++r2) {
                            jr(b * arest + r, b2 * arest + r2) = jn(b * mem * arest + r, b2 * mem * arest + r2);
                        }
                    }
                }
            }
            for (int b = 0; b < brest; ++b) {
                for (int b2 = 0; b2 < brest; ++b2) {
                    for (int mu = 0; mu < mem; ++mu) {
                        for (int r = 0; r < arest; ++r) {
                            for (int r2 = 0; r2 < arest; ++r2) {
                                ignore((b * mem + mu) * arest + r, (b2 * mem + mu) * arest + r2) =
                                    jr(b * arest + r, b2 * arest + r2);
                            }
                        }
                    }
                }
            }
        }
        const SystemLabel in_k = k == 0 ? as[k] : model.compose(model.atom(memory), as[k]);
        if (mem > 1 && linalg::max_abs(jn - ignore) <= tol) {
            comb.steps.push_back(h.map_from_kraus(in_k, model.compose(bs[k], model.atom(1)), dk, MapTag::Channel));
            w = next.leftCols(arest);
            memory = 1;
        } else {
            comb.steps.push_back(h.map_from_kraus(in_k, model.compose(bs[k], model.atom(mem)),
                                                  {linalg::isometry_from_kraus(dk)}, MapTag::Channel));
            w = next;
            memory = mem;
        }
        comb.memory_dims.push_back(memory);
    }
    const int blast = bs[n - 1].hilbert_dim();
    const auto last = linalg::kraus_from_isometry(w, blast, static_cast<int>(w.rows()) / blast);
    const SystemLabel in_last = n == 1 ? as[0] : model.compose(model.atom(memory), as[n - 1]);
    comb.steps.push_back(h.map_from_kraus(
        in_last, bs[n - 1],
        linalg::kraus_from_choi(linalg::choi_from_kraus(last), static_cast<int>(w.cols()), blast, 1e-12, real),
        MapTag::Channel));
    comb.residual = linalg::max_abs(h.choi(recompose(model, comb)) - h.choi(c));
    return comb;
}

LinearMap random_two_step_comb(const TheoryModel &model, int d, int memory, Rng &rng) {
    const auto &h = require_hilbert(model, "random_two_step_comb");
    const bool real = h.is_real();
    const SystemLabel q = model.atom(d);
    const SystemLabel mem = model.atom(memory);
    const LinearMap s1 =
        h.map_from_kraus(q, model.compose(q, mem), linalg::random_channel_kraus(d, d * memory, 2, rng, real));
    const LinearMap s2 =
        h.map_from_kraus(model.compose(mem, q), q, linalg::random_channel_kraus(d * memory, d, 2, rng, real));
    return model.compose_seq(model.tensor(model.identity(q), s2), model.tensor(s1, model.identity(q)));
}

LinearMap recompose(const TheoryModel &model, const CombDecomposition &comb) {
    const auto &h = require_hilbert(model, "recompose");
    const int n = static_cast<int>(comb.steps.size());
    // input dims of each step without the memory, and output dims without the memory
    std::vector<int> a(n), b(n);
    std::vector<int> in_factors, out_factors;
    for (int k = 0; k < n; ++k) {
        const auto &s = comb.steps[k];
        const int skip_in = k == 0 ? 0 : 1;
        const int skip_out = k + 1 == n ? 0 : 1;
        a[k] = s.input.hilbert_dim() / (k == 0 ? 1 : s.input.factors.front());
        b[k] = s.output.hilbert_dim() / (k + 1 == n ? 1 : s.output.factors.back());
        in_factors.insert(in_factors.end(), s.input.factors.begin() + skip_in, s.input.factors.end());
        out_factors.insert(out_factors.end(), s.output.factors.begin(), s.output.factors.end() - skip_out);
    }
    std::vector<CMat> total = {CMat::Identity(std::accumulate(a.begin(), a.end(), 1, std::multiplies<>()),
                                              std::accumulate(a.begin(), a.end(), 1, std::multiplies<>()))};
    int before = 1;  // B_0 .. B_{k-1}
    for (int k = 0; k < n; ++k) {
        int after = 1;  // A_{k+1} ..
        for (int j = k + 1; j < n; ++j) after *= a[j];
        std::vector<CMat> next;
        for (const auto &kr : h.kraus_of(comb.steps[k])) {
            const CMat lifted = linalg::kron(linalg::kron(CMat(CMat::Identity(before, before)), kr),
                                             CMat(CMat::Identity(after, after)));
            for (const auto &t : total) next.push_back(lifted * t);
        }
        total = std::move(next);
        before *= b[k];
    }
    return h.map_from_kraus(model.system(in_factors), model.system(out_factors), std::move(total), MapTag::Channel);
}

Payload choi_payload(const ChoiState &r, const FaithfulPair &fp) {
    Payload p = payload_of(r.state);
    nlohmann::json meta = {{"input_dims", r.input.factors},
                           {"output_dims", r.output.factors},
                           {"d", fp.system.hilbert_dim()},
                           {"probability", fp.probability},
                           {"convention", "R = (C (x) I) Psi with Psi maximally entangled on A (x) A~"}};
    p.metadata["faithful_pair"] = meta.dump();
    return p;
}

}  // namespace purelab
