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

#pragma once

// Reference computations used to check the library. They deliberately avoid the
// library's own linear-algebra paths: eigenvalues come from a cyclic Jacobi sweep,
// channel actions from explicit index loops.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(RMat a) {
    const auto n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (off < 1e-30) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (Eigen::Index i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Eigenvalues of a Hermitian matrix through its real 2n x 2n embedding.
inline std::vector<double> hermitian_eigenvalues(const CMat &h) {
    const auto n = h.rows();
    RMat big(2 * n, 2 * n);
    big << h.real(), -h.imag(), h.imag(), h.real();
    auto doubled = jacobi_eigenvalues(big);
    std::vector<double> ev;
    for (size_t i = 0; i < doubled.size(); i += 2) ev.push_back(0.5 * (doubled[i] + doubled[i + 1]));
    return ev;
}

inline double trace_norm(const CMat &h) {
    double s = 0.0;
    for (double v : hermitian_eigenvalues(h)) s += std::abs(v);
    return s;
}

inline double operator_norm(const CMat &h) {
    double s = 0.0;
    for (double v : hermitian_eigenvalues(h)) s = std::max(s, std::abs(v));
    return s;
}

/// sum_k K rho K^dagger written out entry by entry.
inline CMat kraus_apply(const std::vector<CMat> &kraus, const CMat &rho) {
    const auto dout = kraus.front().rows();
    const auto din = kraus.front().cols();
    CMat out = CMat::Zero(dout, dout);
    for (const auto &k : kraus) {
        for (Eigen::Index i = 0; i < dout; ++i) {
            for (Eigen::Index j = 0; j < dout; ++j) {
                cplx acc = 0.0;
                for (Eigen::Index a = 0; a < din; ++a) {
                    for (Eigen::Index b = 0; b < din; ++b) acc += k(i, a) * rho(a, b) * std::conj(k(j, b));
                }
                out(i, j) += acc;
            }
        }
    }
    return out;
}

/// Diamond distance between two unitary channels from the spread of the eigenphases
/// of U^dagger V: 2 sin(theta/2) for an arc of width theta < pi, else 2.
inline double unitary_diamond_distance(const CMat &u, const CMat &v) {
    Eigen::ComplexEigenSolver<CMat> es(u.adjoint() * v);
    std::vector<double> phases;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) phases.push_back(std::arg(es.eigenvalues()(i)));
    std::sort(phases.begin(), phases.end());
    double largest_gap = 2.0 * std::numbers::pi - (phases.back() - phases.front());
    for (size_t i = 1; i < phases.size(); ++i) largest_gap = std::max(largest_gap, phases[i] - phases[i - 1]);
    const double arc = 2.0 * std::numbers::pi - largest_gap;
    if (arc >= std::numbers::pi) return 2.0;
    return 2.0 * std::sin(arc / 2.0);
}

inline CMat pauli(char which) {
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
    }
    return p;
}

inline CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

/// Trace distance of (D - I) (x) id applied to |psi><psi| maximised over a grid of
/// two-qubit inputs cos t |u>|0> + sin t |u_perp>|1>, with |u> on the Bloch sphere.
/// Any channel covariant under unitaries attains its maximum on such inputs.
template <class Channel>
inline double grid_transformation_norm(const Channel &delta, int steps) {
    double best = 0.0;
    const double pi = std::numbers::pi;
    for (int it = 0; it <= steps; ++it) {
        const double t = (pi / 2.0) * it / steps;
        for (int ith = 0; ith <= steps; ++ith) {
            const double th = pi * ith / steps;
            for (int iph = 0; iph < steps; ++iph) {
                const double ph = 2.0 * pi * iph / steps;
                Eigen::VectorXcd u(2), w(2);
                u << std::cos(th / 2), std::exp(cplx(0, ph)) * std::sin(th / 2);
                w << -std::exp(cplx(0, -ph)) * std::sin(th / 2), std::cos(th / 2);
                Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
                for (int a = 0; a < 2; ++a) {
                    psi(2 * a + 0) += std::cos(t) * u(a);
                    psi(2 * a + 1) += std::sin(t) * w(a);
                }
                best = std::max(best, trace_norm(delta(CMat(psi * psi.adjoint()))));
            }
        }
    }
    return best;
}

}  // namespace oracle
