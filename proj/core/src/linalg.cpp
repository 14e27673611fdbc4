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

#include "purelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "purelab/errors.hpp"

namespace purelab::linalg {

namespace {

std::vector<int> strides_of(std::span<const int> dims) {
    std::vector<int> strides(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    return strides;
}

// Maps every flat index of the permuted layout to its flat index in the original layout.
std::vector<int> permutation_index(std::span<const int> dims, std::span<const int> perm) {
    if (perm.size() != dims.size()) {
        throw ContractViolation("permute_factors: permutation size mismatch");
    }
    std::vector<int> new_dims(dims.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        new_dims[i] = dims[perm[i]];
    }
    auto old_strides = strides_of(dims);
    int total = product(dims);
    std::vector<int> map(total);
    std::vector<int> digits(dims.size(), 0);
    for (int flat = 0; flat < total; ++flat) {
        int old_flat = 0;
        for (size_t i = 0; i < perm.size(); ++i) {
            old_flat += digits[i] * old_strides[perm[i]];
        }
        map[flat] = old_flat;
        for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
            if (++digits[i] < new_dims[i]) break;
            digits[i] = 0;
        }
    }
    return map;
}

double gauss(Rng &rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

}  // namespace

int product(std::span<const int> dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

RMat kron(const RMat &a, const RMat &b) {
    RMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVec kron(const CVec &a, const CVec &b) {
    CVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

CMat permute_factors(const CMat &x, std::span<const int> dims, std::span<const int> perm) {
    auto map = permutation_index(dims, perm);
    const int n = static_cast<int>(map.size());
    if (x.rows() != n || x.cols() != n) {
        throw ContractViolation("permute_factors: operator size does not match dims");
    }
    CMat out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out(i, j) = x(map[i], map[j]);
        }
    }
    return out;
}

RMat permute_rows(const RMat &x, std::span<const int> dims, std::span<const int> perm) {
    auto map = permutation_index(dims, perm);
    if (x.rows() != static_cast<Eigen::Index>(map.size())) {
        throw ContractViolation("permute_rows: row count does not match dims");
    }
    RMat out(x.rows(), x.cols());
    for (size_t i = 0; i < map.size(); ++i) out.row(i) = x.row(map[i]);
    return out;
}

CMat permutation_unitary(std::span<const int> dims, std::span<const int> perm) {
    auto map = permutation_index(dims, perm);
    const auto n = static_cast<Eigen::Index>(map.size());
    CMat u = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) u(i, map[i]) = 1.0;
    return u;
}

CVec permute_factors(const CVec &v, std::span<const int> dims, std::span<const int> perm) {
    auto map = permutation_index(dims, perm);
    if (v.size() != static_cast<Eigen::Index>(map.size())) {
        throw ContractViolation("permute_factors: vector size does not match dims");
    }
    CVec out(v.size());
    for (size_t i = 0; i < map.size(); ++i) {
        out(i) = v(map[i]);
    }
    return out;
}

CMat partial_trace(const CMat &x, std::span<const int> dims, std::span<const int> keep) {
    std::vector<int> perm(keep.begin(), keep.end());
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) perm.push_back(i);
    }
    CMat y = permute_factors(x, dims, perm);
    int dk = 1;
    for (int k : keep) dk *= dims[k];
    const int dr = product(dims) / dk;
    CMat out = CMat::Zero(dk, dk);
    for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
            cplx acc = 0;
            for (int r = 0; r < dr; ++r) acc += y(i * dr + r, j * dr + r);
            out(i, j) = acc;
        }
    }
    return out;
}

CMat apply_kraus(const std::vector<CMat> &kraus, const CMat &x) {
    if (kraus.empty()) throw ContractViolation("apply_kraus: empty Kraus list");
    CMat out = CMat::Zero(kraus[0].rows(), kraus[0].rows());
    for (const auto &k : kraus) out += k * x * k.adjoint();
    return out;
}

CMat choi_from_kraus(const std::vector<CMat> &kraus) {
    if (kraus.empty()) throw ContractViolation("choi_from_kraus: empty Kraus list");
    const auto dout = kraus[0].rows();
    const auto din = kraus[0].cols();
    CMat j = CMat::Zero(dout * din, dout * din);
    for (const auto &k : kraus) {
        CVec v(dout * din);
        for (Eigen::Index b = 0; b < dout; ++b) {
            for (Eigen::Index a = 0; a < din; ++a) v(b * din + a) = k(b, a);
        }
        j += v * v.adjoint();
    }
    return j;
}

std::vector<CMat> kraus_from_choi(const CMat &choi, int din, int dout, double rel_tol, bool real) {
    if (choi.rows() != din * dout) throw ContractViolation("kraus_from_choi: size mismatch");
    RVec vals;
    CMat vecs;
    if (real) {
        Eigen::SelfAdjointEigenSolver<RMat> es(hermitian_part(choi).real());
        vals = es.eigenvalues();
        vecs = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(choi));
        vals = es.eigenvalues();
        vecs = es.eigenvectors();
    }
    const double top = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<CMat> out;
    for (Eigen::Index k = vals.size() - 1; k >= 0; --k) {
        if (vals(k) <= rel_tol * top) continue;
        CMat kr(dout, din);
        const double s = std::sqrt(vals(k));
        for (int b = 0; b < dout; ++b) {
            for (int a = 0; a < din; ++a) kr(b, a) = s * vecs(b * din + a, k);
        }
        out.push_back(std::move(kr));
    }
    if (out.empty()) out.push_back(CMat::Zero(dout, din));
    return out;
}

CMat isometry_from_kraus(const std::vector<CMat> &kraus) {
    const auto dout = kraus.at(0).rows();
    const auto din = kraus[0].cols();
    const auto denv = static_cast<Eigen::Index>(kraus.size());
    CMat v = CMat::Zero(dout * denv, din);
    for (Eigen::Index k = 0; k < denv; ++k) {
        for (Eigen::Index b = 0; b < dout; ++b) v.row(b * denv + k) = kraus[k].row(b);
    }
    return v;
}

std::vector<CMat> kraus_from_isometry(const CMat &v, int dout, int denv) {
    if (v.rows() != dout * denv) throw ContractViolation("kraus_from_isometry: size mismatch");
    std::vector<CMat> out(denv, CMat::Zero(dout, v.cols()));
    for (int k = 0; k < denv; ++k) {
        for (int b = 0; b < dout; ++b) out[k].row(b) = v.row(b * denv + k);
    }
    return out;
}

CMat hermitian_part(const CMat &x) { return (x + x.adjoint()) / 2.0; }

double trace_norm(const CMat &hermitian) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

double max_abs(const CMat &x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

CMat psd_sqrt(const CMat &x) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(x));
    RVec s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMat pinv(const CMat &x, double rel_tol) {
    Eigen::JacobiSVD<CMat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    RVec inv = RVec::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * top && s(i) > 0) inv(i) = 1.0 / s(i);
    }
    CMat sigma = CMat::Zero(x.cols(), x.rows());
    for (Eigen::Index i = 0; i < s.size(); ++i) sigma(i, i) = inv(i);
    return svd.matrixV() * sigma * svd.matrixU().adjoint();
}

int numerical_rank(const CMat &x, double rel_tol) {
    if (x.size() == 0) return 0;
    Eigen::JacobiSVD<CMat> svd(x);
    const auto &s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) ++r;
    }
    return r;
}

CMat positive_projector(const CMat &hermitian, double tol) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(hermitian));
    const auto n = hermitian.rows();
    CMat p = CMat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (es.eigenvalues()(k) > tol) {
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
        }
    }
    return p;
}

CMat complete_orthonormal(const CMat &partial, int cols) {
    const auto n = partial.rows();
    if (cols > n) throw ContractViolation("complete_orthonormal: too many columns requested");
    CMat out(n, cols);
    int filled = 0;
    for (Eigen::Index c = 0; c < partial.cols() && filled < cols; ++c) {
        CVec v = partial.col(c);
        for (int k = 0; k < filled; ++k) v -= out.col(k) * out.col(k).dot(v);
        const double nv = v.norm();
        if (nv > 1e-10) out.col(filled++) = v / nv;
    }
    for (Eigen::Index e = 0; e < n && filled < cols; ++e) {
        CVec v = CVec::Unit(n, e);
        for (int k = 0; k < filled; ++k) v -= out.col(k) * out.col(k).dot(v);
        // second pass keeps the basis orthonormal to machine precision
        for (int k = 0; k < filled; ++k) v -= out.col(k) * out.col(k).dot(v);
        const double nv = v.norm();
        if (nv > 1e-8) out.col(filled++) = v / nv;
    }
    return out;
}

CMat haar_unitary(int d, Rng &rng) {
    CMat z(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) z(i, j) = cplx(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    }
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ() * CMat::Identity(d, d);
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

CMat haar_orthogonal(int d, Rng &rng) {
    RMat z(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) z(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<RMat> qr(z);
    RMat q = qr.householderQ() * RMat::Identity(d, d);
    RMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        if (r(i, i) < 0) q.col(i) *= -1.0;
    }
    return q.cast<cplx>();
}

CVec random_pure(int d, Rng &rng, bool real) {
    CVec v(d);
    for (int i = 0; i < d; ++i) v(i) = real ? cplx(gauss(rng), 0.0) : cplx(gauss(rng), gauss(rng));
    return v / v.norm();
}

CMat random_density(int d, int rank, Rng &rng, bool real) {
    CMat g(d, rank);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < rank; ++j) g(i, j) = real ? cplx(gauss(rng), 0.0) : cplx(gauss(rng), gauss(rng));
    }
    CMat rho = g * g.adjoint();
    return rho / rho.trace().real();
}

std::vector<CMat> random_channel_kraus(int din, int dout, int count, Rng &rng, bool real) {
    const int n = dout * count;
    if (n < din) throw ContractViolation("random_channel_kraus: environment too small for an isometry");
    CMat u = real ? haar_orthogonal(n, rng) : haar_unitary(n, rng);
    CMat v = u.leftCols(din);
    return kraus_from_isometry(v, dout, count);
}

CMat ket_bra(const CVec &ket, const CVec &bra) { return ket * bra.adjoint(); }

CVec basis_ket(int d, int i) { return CVec::Unit(d, i); }

CVec max_entangled(int d) {
    CVec v = CVec::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return v;
}

}  // namespace purelab::linalg
