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


#include "purelab/metrology.hpp"

#include <cmath>

#include "purelab/errors.hpp"

namespace purelab {

namespace {

void check_normalized(const TheoryModel &model, const StateVec &rho, const char *what) {
    if (rho.system.theory != model.id()) throw ContractViolation(std::string(what) + ": state from another theory");
    if (rho.coords.size() != rho.system.coord_dim) throw ContractViolation(std::string(what) + ": size mismatch");
    const double norm = model.deterministic_effect(rho.system).dot(rho.coords);
    if (std::abs(norm - 1.0) > 1e-9 || !model.in_state_cone(rho.system, rho.coords, 1e-9)) {
        throw ContractViolation(std::string(what) + ": input is not a normalized state");
    }
}

// max <a, delta> over the effect set 0 <= a <= e of a polyhedral model.
double lp_effect_extremum(const Cone &states, const RVec &e, const RVec &delta, double sign) {
    const int n = static_cast<int>(delta.size());
    LpProblem p(n);
    p.objective = sign * delta;
    p.free.assign(n, true);
    for (const auto &g : states.generators()) {
        p.add_lower(g, 0.0);
        p.add_upper(g, e.dot(g));
    }
    LpResult r = lp_solve(p);
    if (r.status != LpStatus::Optimal) throw Error("state_norm: effect-set LP did not reach an optimum");
    return sign * r.value;
}

SystemLabel ancilla_joint(const TheoryModel &model, const SystemLabel &a) {
    return model.compose(a, model.system({std::max(1, a.hilbert_dim())}));
}

}  // namespace

double state_norm(const TheoryModel &model, const SystemLabel &s, const RVec &delta) {
    if (delta.size() != s.coord_dim) throw ContractViolation("state_norm: size mismatch");
    if (auto cone = model.polyhedral_state_cone(s)) {
        const RVec e = model.deterministic_effect(s);
        return lp_effect_extremum(*cone, e, delta, 1.0) - lp_effect_extremum(*cone, e, delta, -1.0);
    }
    return model.state_norm(s, delta);
}

double effect_norm(const TheoryModel &model, const SystemLabel &s, const RVec &delta) {
    if (delta.size() != s.coord_dim) throw ContractViolation("effect_norm: size mismatch");
    return model.effect_norm(s, delta);
}

DiscriminationResult discriminate(const TheoryModel &model, const StateVec &rho0, const StateVec &rho1, double pi0,
                                  double pi1) {
    check_normalized(model, rho0, "discriminate");
    check_normalized(model, rho1, "discriminate");
    if (rho0.system != rho1.system) throw ContractViolation("discriminate: states live on different systems");
    if (pi0 < 0 || pi1 < 0 || std::abs(pi0 + pi1 - 1.0) > 1e-12) {
        throw ContractViolation("discriminate: priors must be nonnegative and sum to one");
    }
    const SystemLabel &s = rho0.system;
    const RVec e = model.deterministic_effect(s);
    DiscriminationResult r;
    r.witness = pi1 * rho1.coords - pi0 * rho0.coords;
    RVec a1;
    if (pi0 == 0.0) {
        a1 = e;
    } else if (pi1 == 0.0) {
        a1 = RVec::Zero(s.coord_dim);
    } else {
        a1 = model.positive_part_effect(s, r.witness);
    }
    r.a1 = {s, a1};
    r.a0 = {s, e - a1};
    r.p_success = pi0 * r.a0.coords.dot(rho0.coords) + pi1 * r.a1.coords.dot(rho1.coords);
    return r;
}

WorstCaseTest worst_case_test(const TheoryModel &model, const StateVec &rho0, const StateVec &rho1, double tol) {
    check_normalized(model, rho0, "worst_case_test");
    check_normalized(model, rho1, "worst_case_test");
    if (rho0.system != rho1.system) throw ContractViolation("worst_case_test: states live on different systems");
    const SystemLabel &s = rho0.system;
    const RVec e = model.deterministic_effect(s);
    WorstCaseTest t;
    if ((rho0.coords - rho1.coords).cwiseAbs().maxCoeff() <= tol) {
        t.indistinguishable = true;
        t.a = t.a0 = t.a1 = {s, RVec::Zero(s.coord_dim)};
        t.a1.coords = e;
        return t;
    }
    RVec a = model.positive_part_effect(s, rho0.coords - rho1.coords);
    if (a.dot(rho1.coords) < 0.5) a = 0.5 * (a + e);
    const double p0 = a.dot(rho0.coords);
    const double p1 = a.dot(rho1.coords);
    if (p0 - p1 <= tol) {
        t.indistinguishable = true;
        t.a = t.a0 = t.a1 = {s, RVec::Zero(s.coord_dim)};
        t.a1.coords = e;
        return t;
    }
    t.q = 1.0 / (p0 + p1);
    t.a = {s, a};
    t.a0 = {s, t.q * a};
    t.a1 = {s, e - t.q * a};
    t.error = p1 / (p0 + p1);
    return t;
}

double lifted_output_norm(const TheoryModel &model, const LinearMap &delta, const StateVec &input) {
    const SystemLabel joint = ancilla_joint(model, delta.input);
    if (input.system != joint) throw ContractViolation("lifted_output_norm: input must live on A (x) A'");
    std::vector<int> pos(delta.input.factors.size());
    for (size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
    Applied out = model.apply(joint, input.coords, delta, pos);
    return state_norm(model, out.system, out.coords.col(0));
}

TransformationNorm transformation_norm(const TheoryModel &model, const LinearMap &delta, const NormBudget &budget) {
    if (budget.restarts < 1 || budget.max_iterations < 1) throw ContractViolation("transformation_norm: empty budget");
    const SystemLabel &a = delta.input;
    const SystemLabel joint = ancilla_joint(model, a);
    TransformationNorm best;

    if (model.id() == TheoryId::Classical) {
        // the norm is convex in the input, so a vertex e_i (x) e_0 attains it
        for (int i = 0; i < a.coord_dim; ++i) {
            const double v = state_norm(model, delta.output, delta.matrix.col(i));
            if (i == 0 || v > best.lower_bound) {
                best.lower_bound = v;
                best.certificate = {joint, model.embed_product(a, RVec::Unit(a.coord_dim, i), model.system({a.hilbert_dim()}),
                                                               RVec::Unit(a.hilbert_dim(), 0))};
            }
        }
        return best;
    }
    if (model.id() != TheoryId::Quantum) {
        throw Unsupported("transformation_norm: an ancilla as large as the input is not known to suffice in the " +
                          to_string(model.id()) + " model");
    }
    const auto &h = require_hilbert(model, "transformation_norm");
    const int d = a.hilbert_dim();
    std::vector<int> pos(a.factors.size());
    for (size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<int>(i);
    // Heisenberg picture: Tr(W delta(X)) = <w, M x>, so the adjoint has matrix M^T
    const LinearMap adjoint{delta.output, delta.input, delta.matrix.transpose(), MapTag::Unconstrained, std::nullopt};
    // apply() puts the map output first and the ancilla after it, so the output
    // factors of delta are again the leading positions
    std::vector<int> out_pos(delta.output.factors.size());
    for (size_t i = 0; i < out_pos.size(); ++i) out_pos[i] = static_cast<int>(i);

    Rng rng(budget.seed);
    for (int start = 0; start < budget.restarts; ++start) {
        CVec psi = start == 0 ? CVec(linalg::max_entangled(d)) : linalg::random_pure(d * d, rng);
        double value = -1.0;
        int it = 0;
        for (; it < budget.max_iterations; ++it) {
            const RVec x = h.pure_state(joint, psi).coords;
            const Applied y = model.apply(joint, x, delta, pos);
            const CMat ym = linalg::hermitian_part(h.to_matrix(y.system, RVec(y.coords.col(0))));
            const double current = linalg::trace_norm(ym);
            if (current > best.lower_bound || (start == 0 && it == 0)) {
                best.lower_bound = current;
                best.certificate = {joint, x};
                best.best_start = start;
            }
            if (it > 0 && current - value < budget.tolerance) break;
            value = current;
            const CMat w = linalg::positive_projector(ym) - linalg::positive_projector(-ym);
            const RVec wc = h.from_matrix(y.system, w);
            const Applied pulled = model.apply(y.system, wc, adjoint, out_pos);
            const CMat hm = linalg::hermitian_part(h.to_matrix(pulled.system, RVec(pulled.coords.col(0))));
            Eigen::SelfAdjointEigenSolver<CMat> es(hm);
            psi = es.eigenvectors().col(hm.rows() - 1);
        }
        best.iterations += it;
    }
    return best;
}

}  // namespace purelab
