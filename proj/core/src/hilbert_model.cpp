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


#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "model_internal.hpp"
#include "purelab/errors.hpp"

namespace purelab {

const std::vector<CMat> &hermitian_basis(int d, bool real) {
    static std::mutex mu;
    static std::map<std::pair<int, bool>, std::vector<CMat>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({d, real});
    if (it != cache.end()) return it->second;
    if (d < 1) throw ContractViolation("hermitian_basis: dimension must be positive");
    std::vector<CMat> basis;
    basis.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            CMat b = CMat::Zero(d, d);
            b(j, k) = b(k, j) = r2;
            basis.push_back(b);
        }
    }
    if (!real) {
        for (int j = 0; j < d; ++j) {
            for (int k = j + 1; k < d; ++k) {
                CMat b = CMat::Zero(d, d);
                b(j, k) = cplx(0, -r2);
                b(k, j) = cplx(0, r2);
                basis.push_back(b);
            }
        }
    }
    for (int l = 1; l < d; ++l) {
        CMat b = CMat::Zero(d, d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) b(j, j) = norm;
        b(l, l) = -l * norm;
        basis.push_back(b);
    }
    return cache.emplace(std::make_pair(d, real), std::move(basis)).first->second;
}

namespace {

double eig_scale(const CMat &x) { return std::max(1.0, linalg::max_abs(x)); }

Eigen::VectorXd hermitian_eigenvalues(const CMat &x) {
    Eigen::SelfAdjointEigenSolver<CMat> es(linalg::hermitian_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Eigen-decomposition that keeps eigenvectors real when the model is real.
std::pair<RVec, CMat> hermitian_eig(const CMat &x, bool real) {
    if (real) {
        Eigen::SelfAdjointEigenSolver<RMat> es(x.real());
        return {es.eigenvalues(), es.eigenvectors().cast<cplx>()};
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(x);
    return {es.eigenvalues(), es.eigenvectors()};
}

bool psd(const CMat &x, double tol) {
    if (x.size() == 0) return true;
    return hermitian_eigenvalues(x).minCoeff() >= -tol * eig_scale(x);
}

// X = sum_i c_i B_i over the product basis of `factors`, starting at factor k.
CMat product_to_matrix(const std::vector<int> &factors, size_t k, const cplx *c) {
    if (k == factors.size()) return CMat::Constant(1, 1, c[0]);
    const auto &basis = hermitian_basis(factors[k], false);
    long stride = 1;
    for (size_t j = k + 1; j < factors.size(); ++j) stride *= static_cast<long>(factors[j]) * factors[j];
    CMat out;
    for (size_t i = 0; i < basis.size(); ++i) {
        CMat term = linalg::kron(basis[i], product_to_matrix(factors, k + 1, c + i * stride));
        if (i == 0) {
            out = term;
        } else {
            out += term;
        }
    }
    return out;
}

void product_from_matrix(const std::vector<int> &factors, size_t k, const CMat &x, cplx *c) {
    if (k == factors.size()) {
        c[0] = x(0, 0);
        return;
    }
    const int d = factors[k];
    const auto rest = static_cast<Eigen::Index>(x.rows() / d);
    const auto &basis = hermitian_basis(d, false);
    long stride = 1;
    for (size_t j = k + 1; j < factors.size(); ++j) stride *= static_cast<long>(factors[j]) * factors[j];
    for (size_t i = 0; i < basis.size(); ++i) {
        // Tr_1((B_i (x) I) X)
        CMat y = CMat::Zero(rest, rest);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const cplx w = basis[i](b, a);
                if (w != cplx(0.0)) y += w * x.block(a * rest, b * rest, rest, rest);
            }
        }
        product_from_matrix(factors, k + 1, y, c + i * stride);
    }
}

}  // namespace

// -- HilbertModel ------------------------------------------------------------------------

LinearMap HilbertModel::map_from_kraus(const SystemLabel &in, const SystemLabel &out, std::vector<CMat> kraus,
                                       MapTag tag) const {
    if (kraus.empty()) throw ContractViolation("map_from_kraus: empty Kraus list");
    for (const auto &k : kraus) {
        if (k.rows() != out.hilbert_dim() || k.cols() != in.hilbert_dim()) {
            throw ContractViolation("map_from_kraus: Kraus operator shape does not match systems");
        }
        if (is_real() && k.imag().cwiseAbs().maxCoeff() > 1e-12) {
            throw ContractViolation("map_from_kraus: complex Kraus operator in the real model");
        }
    }
    RMat m(out.coord_dim, in.coord_dim);
    for (int j = 0; j < in.coord_dim; ++j) {
        const CMat b = to_matrix(in, RVec(RVec::Unit(in.coord_dim, j)));
        m.col(j) = from_matrix(out, linalg::apply_kraus(kraus, b));
    }
    return {in, out, m, tag, std::move(kraus)};
}

CMat HilbertModel::choi(const LinearMap &m) const {
    if (m.kraus) return linalg::choi_from_kraus(*m.kraus);
    const int din = m.input.hilbert_dim();
    const int dout = m.output.hilbert_dim();
    const CMat mc = m.matrix.cast<cplx>();
    CMat j = CMat::Zero(din * dout, din * dout);
    for (int a = 0; a < din; ++a) {
        for (int b = 0; b < din; ++b) {
            CMat eab = CMat::Zero(din, din);
            eab(a, b) = 1.0;
            const CMat y = to_matrix(m.output, CVec(mc * from_matrix_c(m.input, eab)));
            j += linalg::kron(y, eab);
        }
    }
    return j;
}

std::vector<CMat> HilbertModel::kraus_of(const LinearMap &m) const {
    if (m.kraus) return *m.kraus;
    return minimal_kraus(m);
}

std::vector<CMat> HilbertModel::minimal_kraus(const LinearMap &m) const {
    const CMat j = choi(m);
    if (!psd(j, 1e-9)) throw ContractViolation("kraus_of: map is not completely positive");
    return linalg::kraus_from_choi(j, m.input.hilbert_dim(), m.output.hilbert_dim(), 1e-12, is_real());
}

StateVec HilbertModel::state_from_matrix(const SystemLabel &s, const CMat &x) const {
    if (x.rows() != s.hilbert_dim() || x.cols() != s.hilbert_dim()) {
        throw ContractViolation("state_from_matrix: matrix size does not match system");
    }
    return {s, from_matrix(s, x)};
}

StateVec HilbertModel::pure_state(const SystemLabel &s, const CVec &psi) const {
    return state_from_matrix(s, linalg::ket_bra(psi, psi));
}

double HilbertModel::state_norm(const SystemLabel &s, const RVec &delta) const {
    return linalg::trace_norm(linalg::hermitian_part(to_matrix(s, delta)));
}

double HilbertModel::effect_norm(const SystemLabel &s, const RVec &delta) const {
    return hermitian_eigenvalues(to_matrix(s, delta)).cwiseAbs().maxCoeff();
}

RVec HilbertModel::positive_part_effect(const SystemLabel &s, const RVec &delta) const {
    return from_matrix(s, linalg::positive_projector(linalg::hermitian_part(to_matrix(s, delta))));
}

bool HilbertModel::in_state_cone(const SystemLabel &s, const RVec &x, double tol) const {
    if (x.size() != s.coord_dim) throw ContractViolation("in_state_cone: size mismatch");
    return psd(to_matrix(s, x), tol);
}

bool HilbertModel::in_effect_cone(const SystemLabel &s, const RVec &a, double tol) const {
    return in_state_cone(s, a, tol);
}

bool HilbertModel::is_pure(const SystemLabel &s, const RVec &x, double tol) const {
    const CMat m = to_matrix(s, x);
    const RVec ev = hermitian_eigenvalues(m);
    const double top = ev.maxCoeff();
    if (top <= tol || ev.minCoeff() < -tol) return false;
    return ev.size() == 1 || ev(ev.size() - 2) <= tol * std::max(1.0, top);
}

Purified HilbertModel::purify(const SystemLabel &s, const RVec &x, int pad_to) const {
    const CMat m = linalg::hermitian_part(to_matrix(s, x));
    if (!psd(m, 1e-9)) throw ContractViolation("purify: input is not a state");
    const int n = s.hilbert_dim();
    const auto [vals, vecs] = hermitian_eig(m, is_real());
    const double top = std::max(vals.maxCoeff(), 0.0);
    if (top <= 0.0) throw ContractViolation("purify: zero state");
    std::vector<int> kept;
    for (int k = n - 1; k >= 0; --k) {
        if (vals(k) > 1e-12 * top) kept.push_back(k);
    }
    const int rank = static_cast<int>(kept.size());
    const int dim = std::max(rank, pad_to);
    Purified p;
    p.purifying = system({dim});
    p.joint = compose(s, p.purifying);
    p.psi = CVec::Zero(static_cast<Eigen::Index>(n) * dim);
    for (int r = 0; r < rank; ++r) {
        const double w = std::sqrt(vals(kept[r]));
        for (int a = 0; a < n; ++a) p.psi(a * dim + r) += w * vecs(a, kept[r]);
    }
    p.coords = from_matrix(p.joint, linalg::ket_bra(p.psi, p.psi));
    return p;
}

RVec HilbertModel::deterministic_effect(const SystemLabel &s) const {
    return from_matrix(s, CMat::Identity(s.hilbert_dim(), s.hilbert_dim()));
}

RVec HilbertModel::invariant_state(const SystemLabel &s) const {
    const int n = s.hilbert_dim();
    return from_matrix(s, CMat::Identity(n, n) / static_cast<double>(n));
}

RVec HilbertModel::random_pure_state(const SystemLabel &s, Rng &rng) const {
    return pure_state(s, linalg::random_pure(s.hilbert_dim(), rng, is_real())).coords;
}

RVec HilbertModel::random_state(const SystemLabel &s, Rng &rng) const {
    const int n = s.hilbert_dim();
    return from_matrix(s, linalg::random_density(n, n, rng, is_real()));
}

LinearMap HilbertModel::random_reversible(const SystemLabel &s, Rng &rng) const {
    const int n = s.hilbert_dim();
    CMat u = is_real() ? linalg::haar_orthogonal(n, rng) : linalg::haar_unitary(n, rng);
    return map_from_kraus(s, s, {u}, MapTag::Reversible);
}

LinearMap HilbertModel::random_channel(const SystemLabel &in, const SystemLabel &out, Rng &rng) const {
    const int din = in.hilbert_dim();
    const int dout = out.hilbert_dim();
    return map_from_kraus(in, out, linalg::random_channel_kraus(din, dout, din * dout, rng, is_real()));
}

std::vector<RVec> HilbertModel::spanning_states(const SystemLabel &s) const {
    const int n = s.hilbert_dim();
    std::vector<RVec> out;
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) out.push_back(pure_state(s, linalg::basis_ket(n, i)).coords);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            CVec plus = r2 * (linalg::basis_ket(n, i) + linalg::basis_ket(n, j));
            out.push_back(pure_state(s, plus).coords);
            if (!is_real()) {
                CVec phase = r2 * (linalg::basis_ket(n, i) + cplx(0, 1) * linalg::basis_ket(n, j));
                out.push_back(pure_state(s, phase).coords);
            }
        }
    }
    return out;
}

LinearMap HilbertModel::identity(const SystemLabel &s) const {
    LinearMap m = TheoryModel::identity(s);
    m.kraus = std::vector<CMat>{CMat::Identity(s.hilbert_dim(), s.hilbert_dim())};
    return m;
}

LinearMap HilbertModel::discard(const SystemLabel &s) const {
    LinearMap m = TheoryModel::discard(s);
    const int n = s.hilbert_dim();
    std::vector<CMat> kraus;
    for (int i = 0; i < n; ++i) kraus.push_back(linalg::basis_ket(n, i).transpose());
    m.kraus = std::move(kraus);
    return m;
}

LinearMap HilbertModel::prepare(const StateVec &rho) const {
    LinearMap m = TheoryModel::prepare(rho);
    const CMat x = linalg::hermitian_part(to_matrix(rho.system, rho.coords));
    if (!psd(x, 1e-9)) {
        m.tag = MapTag::Unconstrained;
        return m;
    }
    const auto [vals, vecs] = hermitian_eig(x, is_real());
    std::vector<CMat> kraus;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        if (vals(k) <= 0.0) continue;
        kraus.push_back(std::sqrt(vals(k)) * vecs.col(k));
    }
    if (kraus.empty()) kraus.push_back(CMat::Zero(x.rows(), 1));
    m.kraus = std::move(kraus);
    return m;
}

LinearMap HilbertModel::observe(const EffectVec &a) const {
    LinearMap m = TheoryModel::observe(a);
    const CMat x = linalg::hermitian_part(to_matrix(a.system, a.coords));
    if (!psd(x, 1e-9)) {
        m.tag = MapTag::Unconstrained;
        return m;
    }
    CMat root = linalg::psd_sqrt(x);
    if (is_real()) root = root.real().cast<cplx>();
    std::vector<CMat> kraus;
    for (Eigen::Index k = 0; k < root.rows(); ++k) kraus.push_back(root.row(k));
    m.kraus = std::move(kraus);
    return m;
}

namespace detail {

// -- complex quantum ---------------------------------------------------------------------

int QuantumModel::coord_dim(std::span<const int> factors) const {
    int d = 1;
    for (int f : factors) d *= f * f;
    return d;
}

CMat QuantumModel::to_matrix(const SystemLabel &s, const CVec &coords) const {
    if (coords.size() != s.coord_dim) throw ContractViolation("to_matrix: coordinate length mismatch");
    return product_to_matrix(s.factors, 0, coords.data());
}

CVec QuantumModel::from_matrix_c(const SystemLabel &s, const CMat &x) const {
    if (x.rows() != s.hilbert_dim() || x.cols() != s.hilbert_dim()) {
        throw ContractViolation("from_matrix: matrix size does not match system");
    }
    CVec c(s.coord_dim);
    product_from_matrix(s.factors, 0, x, c.data());
    return c;
}

RVec QuantumModel::embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b, const RVec &y) const {
    if (x.size() != a.coord_dim || y.size() != b.coord_dim) throw ContractViolation("embed_product: size mismatch");
    return linalg::kron(RMat(x), RMat(y)).col(0);
}

Applied QuantumModel::apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                            std::span<const int> positions) const {
    return apply_by_legs(s, coords, m, positions, legs_of(s, true));
}

RMat QuantumModel::permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const {
    if (perm.size() != s.factors.size()) throw ContractViolation("permute: permutation length mismatch");
    return linalg::permute_rows(coords, legs_of(s, true), perm);
}

// -- real quantum ----------------------------------------------------------------------

int RealQuantumModel::coord_dim(std::span<const int> factors) const {
    const int n = linalg::product(factors);
    return n * (n + 1) / 2;
}

CMat RealQuantumModel::to_matrix(const SystemLabel &s, const CVec &coords) const {
    if (coords.size() != s.coord_dim) throw ContractViolation("to_matrix: coordinate length mismatch");
    const auto &basis = hermitian_basis(s.hilbert_dim(), true);
    CMat out = CMat::Zero(s.hilbert_dim(), s.hilbert_dim());
    for (size_t i = 0; i < basis.size(); ++i) out += coords(i) * basis[i];
    return out;
}

CVec RealQuantumModel::from_matrix_c(const SystemLabel &s, const CMat &x) const {
    if (x.rows() != s.hilbert_dim() || x.cols() != s.hilbert_dim()) {
        throw ContractViolation("from_matrix: matrix size does not match system");
    }
    const auto &basis = hermitian_basis(s.hilbert_dim(), true);
    CVec c(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) c(i) = (basis[i] * x).trace();
    return c;
}

RVec RealQuantumModel::embed_product(const SystemLabel &a, const RVec &x, const SystemLabel &b,
                                     const RVec &y) const {
    return from_matrix(compose(a, b), linalg::kron(to_matrix(a, x), to_matrix(b, y)));
}

Applied RealQuantumModel::apply(const SystemLabel &s, const RMat &coords, const LinearMap &m,
                                std::span<const int> positions) const {
    if (coords.rows() != s.coord_dim) throw ContractViolation("apply: coordinate length does not match system");
    const auto perm = front_permutation(s, m, positions);
    std::vector<int> rest_factors;
    for (size_t i = positions.size(); i < perm.size(); ++i) rest_factors.push_back(s.factors[perm[i]]);
    const SystemLabel rest_sys = compose(m.output, system(rest_factors));
    const int rest = linalg::product(rest_factors);

    bool identity_order = positions.size() == s.factors.size();
    for (size_t i = 0; identity_order && i < positions.size(); ++i) identity_order = positions[i] == static_cast<int>(i);
    if (identity_order && !m.kraus) return {m.output, m.matrix * coords};

    const bool prep = m.input.is_trivial();
    const bool eff = m.output.is_trivial();
    if (!m.kraus && !prep && !eff) {
        throw Unsupported(
            "real-quantum local action needs a Kraus realisation: coordinates do not determine the extension");
    }
    const CMat id_rest = CMat::Identity(rest, rest);
    RMat out(rest_sys.coord_dim, coords.cols());
    for (Eigen::Index c = 0; c < coords.cols(); ++c) {
        const CMat x = linalg::permute_factors(to_matrix(s, RVec(coords.col(c))), s.factors, perm);
        CMat y;
        if (m.kraus) {
            y = CMat::Zero(rest_sys.hilbert_dim(), rest_sys.hilbert_dim());
            for (const auto &k : *m.kraus) {
                const CMat kk = linalg::kron(k, id_rest);
                y += kk * x * kk.adjoint();
            }
        } else if (prep) {
            y = linalg::kron(to_matrix(m.output, RVec(m.matrix.col(0))), x);
        } else {
            const CMat a = linalg::kron(to_matrix(m.input, RVec(m.matrix.row(0).transpose())), id_rest);
            const CMat ax = a * x;
            const int dt = m.input.hilbert_dim();
            y = CMat::Zero(rest, rest);
            for (int t = 0; t < dt; ++t) y += ax.block(t * rest, t * rest, rest, rest);
        }
        out.col(c) = from_matrix(rest_sys, y);
    }
    return {rest_sys, out};
}

RMat RealQuantumModel::permute(const SystemLabel &s, const RMat &coords, std::span<const int> perm) const {
    if (perm.size() != s.factors.size()) throw ContractViolation("permute: permutation length mismatch");
    const SystemLabel target = permuted(s, perm);
    RMat out(coords.rows(), coords.cols());
    for (Eigen::Index c = 0; c < coords.cols(); ++c) {
        out.col(c) = from_matrix(target, linalg::permute_factors(to_matrix(s, RVec(coords.col(c))), s.factors, perm));
    }
    return out;
}

}  // namespace detail
}  // namespace purelab
