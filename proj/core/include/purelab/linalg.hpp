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

// Dense Hilbert-space helpers shared by the matrix-backed theory models.
//
// Conventions:
//  * multipartite operators are ordered with the first factor most significant
//    (the Kronecker convention);
//  * vec(K) = sum_j K|j> (x) |j>, i.e. row-major vectorisation, so the Choi
//    matrix of a Kraus list is J = sum_k vec(K_k) vec(K_k)^dagger on out (x) in.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace purelab {

using Rng = std::mt19937_64;
using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

namespace linalg {

int product(std::span<const int> dims);

CMat kron(const CMat &a, const CMat &b);
RMat kron(const RMat &a, const RMat &b);
CVec kron(const CVec &a, const CVec &b);

/// Partial trace keeping the factors listed in `keep`, in the listed order.
CMat partial_trace(const CMat &x, std::span<const int> dims, std::span<const int> keep);

/// Reorders tensor factors: factor i of the result is factor perm[i] of the input.
CMat permute_factors(const CMat &x, std::span<const int> dims, std::span<const int> perm);
/// Same reordering applied to the rows of a real matrix whose rows index a tensor.
RMat permute_rows(const RMat &x, std::span<const int> dims, std::span<const int> perm);
/// Unitary U with U (v_0 (x) ... ) = v_perm[0] (x) ..., i.e. permute_factors(x) = U x U^dagger.
CMat permutation_unitary(std::span<const int> dims, std::span<const int> perm);
CVec permute_factors(const CVec &v, std::span<const int> dims, std::span<const int> perm);

CMat apply_kraus(const std::vector<CMat> &kraus, const CMat &x);

CMat choi_from_kraus(const std::vector<CMat> &kraus);
/// Kraus operators from the eigenvectors of a Choi operator on out (x) in. With `real`
/// a real eigensolver is used, so a real Choi operator yields real operators.
std::vector<CMat> kraus_from_choi(const CMat &choi, int din, int dout, double rel_tol = 1e-12, bool real = false);

/// Stacks a Kraus list into V = sum_k K_k (x) |k>, an operator in -> out (x) env.
CMat isometry_from_kraus(const std::vector<CMat> &kraus);
std::vector<CMat> kraus_from_isometry(const CMat &v, int dout, int denv);

double trace_norm(const CMat &hermitian);
double max_abs(const CMat &x);
CMat hermitian_part(const CMat &x);
CMat psd_sqrt(const CMat &x);
CMat pinv(const CMat &x, double rel_tol = 1e-10);
int numerical_rank(const CMat &x, double rel_tol = 1e-10);

/// Projector onto the strictly positive eigenspace of a Hermitian matrix.
CMat positive_projector(const CMat &hermitian, double tol = 0.0);

/// Extends a matrix with orthonormal columns to `cols` orthonormal columns.
CMat complete_orthonormal(const CMat &partial, int cols);

CMat haar_unitary(int d, Rng &rng);
CMat haar_orthogonal(int d, Rng &rng);
CVec random_pure(int d, Rng &rng, bool real = false);
CMat random_density(int d, int rank, Rng &rng, bool real = false);
/// Kraus operators of a random channel din -> dout obtained from a Haar isometry.
std::vector<CMat> random_channel_kraus(int din, int dout, int count, Rng &rng, bool real = false);

CMat ket_bra(const CVec &ket, const CVec &bra);
CVec basis_ket(int d, int i);
CVec max_entangled(int d);

}  // namespace linalg
}  // namespace purelab
