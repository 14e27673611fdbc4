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


#include <algorithm>
#include <cmath>
#include <numeric>

#include "model_internal.hpp"
#include "purelab/errors.hpp"

namespace purelab {

namespace {

MapTag weaker(MapTag a, MapTag b) { return static_cast<int>(a) < static_cast<int>(b) ? a : b; }

std::optional<std::vector<CMat>> kraus_products(const std::optional<std::vector<CMat>> &a,
                                                const std::optional<std::vector<CMat>> &b, bool tensor) {
    if (!a || !b) return std::nullopt;
    std::vector<CMat> out;
    out.reserve(a->size() * b->size());
    for (const auto &x : *a) {
        for (const auto &y : *b) out.push_back(tensor ? linalg::kron(x, y) : CMat(x * y));
    }
    return out;
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
    std::vector<int> inv(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

void check_permutation(std::span<const int> perm, size_t n) {
    if (perm.size() != n) throw ContractViolation("permutation length does not match factor count");
    std::vector<bool> seen(n, false);
    for (int p : perm) {
        if (p < 0 || static_cast<size_t>(p) >= n || seen[p]) throw ContractViolation("invalid factor permutation");
        seen[p] = true;
    }
}

}  // namespace

namespace detail {

std::vector<int> front_permutation(const SystemLabel &s, const LinearMap &m, std::span<const int> positions) {
    const int n = static_cast<int>(s.factors.size());
    std::vector<bool> used(n, false);
    std::vector<int> perm;
    for (int p : positions) {
        if (p < 0 || p >= n || used[p]) throw ContractViolation("apply: invalid or repeated factor position");
        used[p] = true;
        perm.push_back(p);
    }
    std::vector<int> target;
    for (int p : positions) target.push_back(s.factors[p]);
    if (m.input.theory != s.theory || target != m.input.factors) {
        throw ContractViolation("apply: map input " + m.input.describe() + " does not match the addressed factors of " +
                                s.describe());
    }
    for (int i = 0; i < n; ++i) {
        if (!used[i]) perm.push_back(i);
    }
    return perm;
}

std::vector<int> legs_of(const SystemLabel &s, bool squared) {
    std::vector<int> legs = s.factors;
    if (squared) {
        for (int &l : legs) l *= l;
    }
    return legs;
}

Applied apply_by_legs(const SystemLabel &s, const RMat &coords, const LinearMap &m, std::span<const int> positions,
                      const std::vector<int> &legs) {
    if (coords.rows() != s.coord_dim) throw ContractViolation("apply: coordinate length does not match system");
    const auto perm = front_permutation(s, m, positions);
    const RMat front = linalg::permute_rows(coords, legs, perm);
    const int dt = m.input.coord_dim;
    const int rest = s.coord_dim / dt;
    const int dout = m.output.coord_dim;
    RMat out(static_cast<Eigen::Index>(dout) * rest, coords.cols());
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (Eigen::Index c = 0; c < coords.cols(); ++c) {
        Eigen::Map<const RowMajor> x(front.col(c).data(), dt, rest);
        RowMajor y = m.matrix * x;
        out.col(c) = Eigen::Map<const RVec>(y.data(), y.size());
    }
    SystemLabel result = m.output;
    for (size_t i = positions.size(); i < perm.size(); ++i) result.factors.push_back(s.factors[perm[i]]);
    result.coord_dim = static_cast<int>(out.rows());
    return {result, out};
}

}  // namespace detail

// -- TheoryModel --------------------------------------------------------------------

SystemLabel TheoryModel::system(std::vector<int> factors) const {
    for (int f : factors) {
        if (f < 1) throw ContractViolation("system factors must be positive");
    }
    SystemLabel s;
    s.theory = id();
    s.coord_dim = coord_dim(factors);
    s.factors = std::move(factors);
    return s;
}

SystemLabel TheoryModel::compose(const SystemLabel &a, const SystemLabel &b) const {
    if (a.theory != id() || b.theory != id()) throw ContractViolation("compose: system from another theory");
    std::vector<int> f = a.factors;
    f.insert(f.end(), b.factors.begin(), b.factors.end());
    return system(std::move(f));
}

SystemLabel TheoryModel::subsystem(const SystemLabel &s, std::span<const int> keep) const {
    std::vector<int> f;
    for (int k : keep) {
        if (k < 0 || static_cast<size_t>(k) >= s.factors.size()) throw ContractViolation("subsystem: bad position");
        f.push_back(s.factors[k]);
    }
    return system(std::move(f));
}

SystemLabel TheoryModel::permuted(const SystemLabel &s, std::span<const int> perm) const {
    check_permutation(perm, s.factors.size());
    return subsystem(s, perm);
}

RVec TheoryModel::marginal(const SystemLabel &s, const RVec &x, std::span<const int> keep) const {
    std::vector<bool> kept(s.factors.size(), false);
    for (int k : keep) {
        if (k < 0 || static_cast<size_t>(k) >= s.factors.size() || kept[k]) {
            throw ContractViolation("marginal: bad or repeated position");
        }
        kept[k] = true;
    }
    std::vector<int> drop;
    for (size_t i = 0; i < kept.size(); ++i) {
        if (!kept[i]) drop.push_back(static_cast<int>(i));
    }
    Applied r = apply(s, x, discard(subsystem(s, drop)), drop);
    // survivors are in ascending original order; reorder them as requested
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> perm;
    for (int k : keep) perm.push_back(static_cast<int>(std::find(sorted.begin(), sorted.end(), k) - sorted.begin()));
    return permute(r.system, r.coords, perm).col(0);
}

LinearMap TheoryModel::identity(const SystemLabel &s) const {
    return {s, s, RMat::Identity(s.coord_dim, s.coord_dim), MapTag::Reversible, std::nullopt};
}

LinearMap TheoryModel::discard(const SystemLabel &s) const {
    return {s, trivial(), deterministic_effect(s).transpose(), MapTag::Channel, std::nullopt};
}

LinearMap TheoryModel::prepare(const StateVec &rho) const {
    const double norm = deterministic_effect(rho.system).dot(rho.coords);
    const MapTag tag = std::abs(norm - 1.0) <= 1e-9 ? MapTag::Channel : MapTag::Transformation;
    return {trivial(), rho.system, rho.coords, tag, std::nullopt};
}

LinearMap TheoryModel::observe(const EffectVec &a) const {
    return {a.system, trivial(), a.coords.transpose(), MapTag::Transformation, std::nullopt};
}

LinearMap TheoryModel::compose_seq(const LinearMap &second, const LinearMap &first) const {
    if (first.output != second.input) {
        throw ContractViolation("compose_seq: " + first.output.describe() + " does not feed " + second.input.describe());
    }
    return {first.input, second.output, second.matrix * first.matrix, weaker(first.tag, second.tag),
            kraus_products(second.kraus, first.kraus, false)};
}

LinearMap TheoryModel::tensor(const LinearMap &a, const LinearMap &b) const {
    LinearMap out;
    out.input = compose(a.input, b.input);
    out.output = compose(a.output, b.output);
    out.tag = weaker(a.tag, b.tag);
    out.kraus = kraus_products(a.kraus, b.kraus, true);
    if (id() != TheoryId::RealQuantum) {
        out.matrix = linalg::kron(a.matrix, b.matrix);
        return out;
    }
    // Coordinates are not multiplicative here, so act leg by leg on a basis.
    const int na = static_cast<int>(a.input.factors.size());
    const int nb = static_cast<int>(b.input.factors.size());
    std::vector<int> pa(na), pb(nb);
    std::iota(pa.begin(), pa.end(), 0);
    Applied step = apply(out.input, RMat::Identity(out.input.coord_dim, out.input.coord_dim), a, pa);
    const int ma = static_cast<int>(a.output.factors.size());
    std::iota(pb.begin(), pb.end(), ma);
    step = apply(step.system, step.coords, b, pb);
    const int mb = static_cast<int>(b.output.factors.size());
    std::vector<int> perm;
    for (int i = 0; i < ma; ++i) perm.push_back(mb + i);
    for (int i = 0; i < mb; ++i) perm.push_back(i);
    out.matrix = permute(step.system, step.coords, perm);
    return out;
}

LinearMap TheoryModel::permute_map(const LinearMap &m, std::span<const int> in_perm,
                                   std::span<const int> out_perm) const {
    LinearMap out = m;
    if (!out_perm.empty()) {
        check_permutation(out_perm, m.output.factors.size());
        out.matrix = permute(m.output, out.matrix, out_perm);
        out.output = permuted(m.output, out_perm);
    }
    if (!in_perm.empty()) {
        check_permutation(in_perm, m.input.factors.size());
        SystemLabel new_in = permuted(m.input, in_perm);
        const auto inv = inverse_permutation(in_perm);
        RMat back = permute(new_in, RMat::Identity(new_in.coord_dim, new_in.coord_dim), inv);
        out.matrix = out.matrix * back;
        out.input = new_in;
    }
    if (m.kraus) {
        std::vector<int> id_in(m.input.factors.size()), id_out(m.output.factors.size());
        std::iota(id_in.begin(), id_in.end(), 0);
        std::iota(id_out.begin(), id_out.end(), 0);
        std::span<const int> pi = in_perm.empty() ? std::span<const int>(id_in) : in_perm;
        std::span<const int> po = out_perm.empty() ? std::span<const int>(id_out) : out_perm;
        const CMat uin = linalg::permutation_unitary(m.input.factors, pi);
        const CMat uout = linalg::permutation_unitary(m.output.factors, po);
        for (auto &k : *out.kraus) k = uout * k * uin.adjoint();
    }
    return out;
}

StateVec TheoryModel::state(const SystemLabel &s, RVec coords) const {
    if (s.theory != id() || coords.size() != s.coord_dim) throw ContractViolation("state: coordinate length mismatch");
    return {s, std::move(coords)};
}

EffectVec TheoryModel::effect(const SystemLabel &s, RVec coords) const {
    if (s.theory != id() || coords.size() != s.coord_dim) throw ContractViolation("effect: coordinate length mismatch");
    return {s, std::move(coords)};
}

bool TheoryModel::is_effect(const SystemLabel &s, const RVec &a, double tol) const {
    return in_effect_cone(s, a, tol) && in_effect_cone(s, deterministic_effect(s) - a, tol);
}

// -- classical --------------------------------------------------------------------------

namespace detail {

int ClassicalModel::coord_dim(std::span<const int> factors) const { return linalg::product(factors); }

RVec ClassicalModel::deterministic_effect(const SystemLabel &s) const { return RVec::Ones(s.coord_dim); }

RVec ClassicalModel::invariant_state(const SystemLabel &s) const {
    return RVec::Constant(s.coord_dim, 1.0 / s.coord_dim);
}

RVec ClassicalModel::embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const {
    if (x.size() != a.coord_dim || y.size() != b.coord_dim) throw ContractViolation("embed_product: size mismatch");
    return linalg::kron(RMat(x), RMat(y)).col(0);
}

Applied ClassicalModel::apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                              std::span<const int> positions) const {
    return apply_by_legs(s, coords, m, positions, legs_of(s, false));
}

RMat ClassicalModel::permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const {
    check_permutation(perm, s.factors.size());
    return linalg::permute_rows(coords, s.factors, perm);
}

bool ClassicalModel::in_state_cone(const SystemLabel &s, const RVec &x, double tol) const {
    if (x.size() != s.coord_dim) throw ContractViolation("in_state_cone: size mismatch");
    return x.size() == 0 || x.minCoeff() >= -tol;
}

bool ClassicalModel::in_effect_cone(const SystemLabel &s, const RVec &a, double tol) const {
    return in_state_cone(s, a, tol);
}

std::optional<Cone> ClassicalModel::polyhedral_state_cone(const SystemLabel &s) const {
    return Cone::orthant(s.coord_dim);
}

double ClassicalModel::state_norm(const SystemLabel &s, const RVec &delta) const {
    if (delta.size() != s.coord_dim) throw ContractViolation("state_norm: size mismatch");
    // sup over the [0,1] box picks the positive entries, inf the negative ones
    return delta.cwiseAbs().sum();
}

double ClassicalModel::effect_norm(const SystemLabel &s, const RVec &delta) const {
    if (delta.size() != s.coord_dim) throw ContractViolation("effect_norm: size mismatch");
    return delta.cwiseAbs().maxCoeff();
}

RVec ClassicalModel::positive_part_effect(const SystemLabel &s, const RVec &delta) const {
    if (delta.size() != s.coord_dim) throw ContractViolation("positive_part_effect: size mismatch");
    return (delta.array() > 0.0).cast<double>().matrix();
}

bool ClassicalModel::is_pure(const SystemLabel &s, const RVec &x, double tol) const {
    if (!in_state_cone(s, x, tol)) return false;
    const double total = x.sum();
    if (total <= tol) return false;
    return x.maxCoeff() >= total - tol;
}

Purified ClassicalModel::purify(const SystemLabel &s, const RVec &x, int pad_to) const {
    if (!is_pure(s, x)) throw PurificationUnsupported("classical mixed states have no purification");
    if (pad_to > 1) throw PurificationUnsupported("classical purifying systems cannot be padded");
    Purified p;
    p.purifying = system({1});
    p.joint = compose(s, p.purifying);
    p.coords = x;
    return p;
}

RVec ClassicalModel::random_pure_state(const SystemLabel &s, Rng &rng) const {
    std::uniform_int_distribution<int> pick(0, s.coord_dim - 1);
    return RVec::Unit(s.coord_dim, pick(rng));
}

RVec ClassicalModel::random_state(const SystemLabel &s, Rng &rng) const {
    std::exponential_distribution<double> expo(1.0);
    RVec x(s.coord_dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = expo(rng);
    return x / x.sum();
}

LinearMap ClassicalModel::random_reversible(const SystemLabel &s, Rng &rng) const {
    std::vector<int> perm(s.coord_dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RMat p = RMat::Zero(s.coord_dim, s.coord_dim);
    for (int i = 0; i < s.coord_dim; ++i) p(perm[i], i) = 1.0;
    return {s, s, p, MapTag::Reversible, std::nullopt};
}

LinearMap ClassicalModel::random_channel(const SystemLabel &in, const SystemLabel &out, Rng &rng) const {
    RMat m(out.coord_dim, in.coord_dim);
    for (int j = 0; j < in.coord_dim; ++j) m.col(j) = random_state(out, rng);
    return {in, out, m, MapTag::Channel, std::nullopt};
}

std::vector<RVec> ClassicalModel::spanning_states(const SystemLabel &s) const {
    std::vector<RVec> out;
    for (int i = 0; i < s.coord_dim; ++i) out.push_back(RVec::Unit(s.coord_dim, i));
    return out;
}

}  // namespace detail

// -- factories and checks --------------------------------------------------------------

ModelPtr classical_model(int n) {
    if (n < 2) throw ContractViolation("classical_model: n must be at least 2");
    return std::make_shared<detail::ClassicalModel>(n);
}

ModelPtr quantum_model(int d) {
    if (d < 2) throw ContractViolation("quantum_model: d must be at least 2");
    return std::make_shared<detail::QuantumModel>(d);
}

ModelPtr real_quantum_model(int d) {
    if (d < 2) throw ContractViolation("real_quantum_model: d must be at least 2");
    return std::make_shared<detail::RealQuantumModel>(d);
}

ModelPtr make_model(TheoryId id, int d) {
    switch (id) {
        case TheoryId::Classical:
            return classical_model(d);
        case TheoryId::Quantum:
            return quantum_model(d);
        case TheoryId::RealQuantum:
            return real_quantum_model(d);
    }
    throw ContractViolation("make_model: unknown theory");
}

const HilbertModel &require_hilbert(const TheoryModel &model, const char *what) {
    const auto *h = dynamic_cast<const HilbertModel *>(&model);
    if (!h) throw Unsupported(std::string(what) + " is not available in the " + to_string(model.id()) + " model");
    return *h;
}

ChannelCheck check_channel(const LinearMap &m, const TheoryModel &model, double tol) {
    if (m.matrix.rows() != m.output.coord_dim || m.matrix.cols() != m.input.coord_dim) {
        throw ContractViolation("check_channel: matrix shape does not match systems");
    }
    ChannelCheck r;
    const RVec ea = model.deterministic_effect(m.input);
    const RVec eb = model.deterministic_effect(m.output);
    const RVec pulled = m.matrix.transpose() * eb;
    r.normalization_residual = (pulled - ea).cwiseAbs().maxCoeff();

    double min_eig = 0.0;
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        const CMat j = linalg::hermitian_part(h->choi(m));
        Eigen::SelfAdjointEigenSolver<CMat> es(j);
        min_eig = es.eigenvalues().minCoeff() / std::max(1, m.input.hilbert_dim());
        r.subnormalized = h->in_effect_cone(m.input, ea - pulled, tol);
    } else {
        min_eig = m.matrix.size() ? m.matrix.minCoeff() : 0.0;
        r.subnormalized = model.in_effect_cone(m.input, ea - pulled, tol);
    }
    r.positivity_residual = std::max(0.0, -min_eig);
    const bool positive = r.positivity_residual <= tol;
    if (positive && r.normalization_residual <= tol) {
        r.verdict = ChannelClass::Channel;
    } else if (positive && r.subnormalized) {
        r.verdict = ChannelClass::Transformation;
    }
    return r;
}

}  // namespace purelab
