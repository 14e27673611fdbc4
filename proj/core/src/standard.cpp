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


#include "purelab/standard.hpp"

#include <cmath>
#include <numbers>

#include "purelab/errors.hpp"

namespace purelab::standard {

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation(std::string(what) + ": parameter must lie in [0, 1]");
}

void require_qubit(const SystemLabel &s, const char *what) {
    if (s.hilbert_dim() != 2) throw ContractViolation(std::string(what) + " acts on a two-level system");
}

RMat classical_mix(const RMat &a, const RMat &b, double p) { return (1.0 - p) * a + p * b; }

}  // namespace

CMat pauli(char which) {
    CMat p = CMat::Zero(2, 2);
    switch (which) {
        case 'I':
            p << 1, 0, 0, 1;
            break;
        case 'X':
            p << 0, 1, 1, 0;
            break;
        case 'Y':
            p << 0, cplx(0, -1), cplx(0, 1), 0;
            break;
        case 'Z':
            p << 1, 0, 0, -1;
            break;
        default:
            throw ContractViolation("pauli: expected one of I, X, Y, Z");
    }
    return p;
}

CMat hadamard() {
    CMat h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

CMat cnot() {
    CMat c = CMat::Zero(4, 4);
    c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
    return c;
}

CMat weyl_shift(int d) {
    CMat x = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
    return x;
}

CMat weyl_clock(int d) {
    CMat z = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
    return z;
}

std::vector<CMat> depolarizing_kraus(int d, double p) {
    check_probability(p, "depolarizing");
    // sqrt(1-p) I plus the replacement channel written with |i><j| operators (real)
    std::vector<CMat> out;
    if (p < 1.0) out.push_back(std::sqrt(1.0 - p) * CMat::Identity(d, d));
    if (p > 0.0) {
        const double w = std::sqrt(p / d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                CMat k = CMat::Zero(d, d);
                k(i, j) = w;
                out.push_back(k);
            }
        }
    }
    return out;
}

std::vector<CMat> amplitude_damping_kraus(double gamma) {
    check_probability(gamma, "amplitude damping");
    CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    return {k0, k1};
}

std::vector<CMat> bit_flip_kraus(double p) {
    check_probability(p, "bit flip");
    return {std::sqrt(1.0 - p) * pauli('I'), std::sqrt(p) * pauli('X')};
}

std::vector<CMat> phase_flip_kraus(double p) {
    check_probability(p, "phase flip");
    return {std::sqrt(1.0 - p) * pauli('I'), std::sqrt(p) * pauli('Z')};
}

StateVec basis_state(const TheoryModel &model, const SystemLabel &s, int k) {
    const int n = s.hilbert_dim();
    if (k < 0 || k >= n) throw ContractViolation("basis_state: index out of range");
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) return h->pure_state(s, linalg::basis_ket(n, k));
    return {s, RVec::Unit(s.coord_dim, k)};
}

EffectVec basis_effect(const TheoryModel &model, const SystemLabel &s, int k) {
    StateVec v = basis_state(model, s, k);
    return {s, v.coords};
}

StateVec max_correlated_state(const TheoryModel &model, const SystemLabel &pair) {
    if (pair.factors.size() != 2 || pair.factors[0] != pair.factors[1]) {
        throw ContractViolation("max_correlated_state: expects a d x d system");
    }
    const int d = pair.factors[0];
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) return h->pure_state(pair, linalg::max_entangled(d));
    RVec x = RVec::Zero(pair.coord_dim);
    for (int i = 0; i < d; ++i) x(i * d + i) = 1.0 / d;
    return {pair, x};
}

EffectVec max_correlated_effect(const TheoryModel &model, const SystemLabel &pair) {
    StateVec v = max_correlated_state(model, pair);
    if (dynamic_cast<const HilbertModel *>(&model)) return {pair, v.coords};
    return {pair, v.coords * pair.factors[0]};
}

LinearMap unitary_channel(const TheoryModel &model, const SystemLabel &s, const CMat &u) {
    const auto &h = require_hilbert(model, "unitary channels");
    if (u.rows() != s.hilbert_dim() || u.cols() != s.hilbert_dim()) {
        throw ContractViolation("unitary_channel: size mismatch");
    }
    if ((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).norm() > 1e-9) {
        throw ContractViolation("unitary_channel: operator is not unitary");
    }
    return h.map_from_kraus(s, s, {u}, MapTag::Reversible);
}

LinearMap depolarizing(const TheoryModel &model, const SystemLabel &s, double p) {
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        return h->map_from_kraus(s, s, depolarizing_kraus(s.hilbert_dim(), p));
    }
    check_probability(p, "depolarizing");
    const RMat replace = model.invariant_state(s) * model.deterministic_effect(s).transpose();
    return {s, s, classical_mix(RMat::Identity(s.coord_dim, s.coord_dim), replace, p), MapTag::Channel,
            std::nullopt};
}

LinearMap bit_flip(const TheoryModel &model, const SystemLabel &s, double p) {
    require_qubit(s, "bit flip");
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) return h->map_from_kraus(s, s, bit_flip_kraus(p));
    check_probability(p, "bit flip");
    RMat flip(2, 2);
    flip << 0, 1, 1, 0;
    return {s, s, classical_mix(RMat::Identity(2, 2), flip, p), MapTag::Channel, std::nullopt};
}

LinearMap phase_flip(const TheoryModel &model, const SystemLabel &s, double p) {
    require_qubit(s, "phase flip");
    const auto &h = require_hilbert(model, "phase flip");
    return h.map_from_kraus(s, s, phase_flip_kraus(p));
}

LinearMap amplitude_damping(const TheoryModel &model, const SystemLabel &s, double gamma) {
    require_qubit(s, "amplitude damping");
    const auto &h = require_hilbert(model, "amplitude damping");
    return h.map_from_kraus(s, s, amplitude_damping_kraus(gamma));
}

LinearMap dephasing(const TheoryModel &model, const SystemLabel &s) {
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        const int n = s.hilbert_dim();
        std::vector<CMat> kraus;
        for (int k = 0; k < n; ++k) kraus.push_back(linalg::ket_bra(linalg::basis_ket(n, k), linalg::basis_ket(n, k)));
        return h->map_from_kraus(s, s, kraus);
    }
    return model.identity(s);
}

LinearMap swap(const TheoryModel &model, const SystemLabel &a, const SystemLabel &b) {
    const SystemLabel ab = model.compose(a, b);
    const int na = static_cast<int>(a.factors.size());
    const int nb = static_cast<int>(b.factors.size());
    std::vector<int> perm;
    for (int i = 0; i < nb; ++i) perm.push_back(na + i);
    for (int i = 0; i < na; ++i) perm.push_back(i);
    std::vector<int> none;
    return model.permute_map(model.identity(ab), none, perm);
}

}  // namespace purelab::standard
