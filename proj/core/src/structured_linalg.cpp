// SPDX-License-Identifier: Apache-2.0
//
// hsdest - hybrid sparse/diffuse channel estimation and CRB analysis toolbox
// Copyright (C) 2026 hsdest contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hsdest/structured_linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "hsdest/signal_model.hpp"

namespace hsdest {

CMat toeplitz_from_gen(const CVec& iota) {
    const int N = static_cast<int>(iota.size());
    CMat T(N, N);
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b <= a; ++b) {
            T(a, b) = iota(a - b);
            T(b, a) = std::conj(iota(a - b));
        }
        T(a, a) = cxd(iota(0).real(), 0.0);
    }
    return T;
}

CVec toeplitz_adjoint(const CMat& M, double hermitian_tol) {
    const int N = static_cast<int>(M.rows());
    if (M.cols() != N) throw std::invalid_argument("toeplitz_adjoint: matrix must be square");
    double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol * scale)
        throw std::invalid_argument("toeplitz_adjoint: input is not Hermitian within tolerance");

    CVec g(N);
    g(0) = cxd(M.trace().real(), 0.0);
    for (int d = 1; d < N; ++d) {
        cxd s(0, 0);
        for (int a = d; a < N; ++a) s += M(a, a - d);
        g(d) = 2.0 * s;
    }
    return g;
}

CMat psd_project(const CMat& H) {
    CMat S = 0.5 * (H + H.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(S);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("psd_project: eigendecomposition failed");
    RVec lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

CMat steering_matrix(const std::vector<double>& freqs, int N) {
    CMat A(N, static_cast<int>(freqs.size()));
    for (int i = 0; i < static_cast<int>(freqs.size()); ++i) A.col(i) = build_steering(freqs[i], N);
    return A;
}

CMat pinv(const CMat& A) {
    if (A.cols() == 0 || A.rows() == 0) return CMat::Zero(A.cols(), A.rows());
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RVec sv = svd.singularValues();
    double cutoff = std::max(A.rows(), A.cols()) *
                    std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
    RVec inv = RVec::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

CMat col_projector(const CMat& A) {
    const int N = static_cast<int>(A.rows());
    if (A.cols() == 0) return CMat::Zero(N, N);
    return A * pinv(A);
}

CVec ridge_solve(const CMat& A, const CVec& b, double lam) {
    if (lam < 0) throw std::invalid_argument("ridge_solve: lam must be >= 0");
    const int k = static_cast<int>(A.cols());
    if (k == 0) return CVec(0);
    CMat G = A.adjoint() * A;
    G.diagonal().array() += lam;
    Eigen::LDLT<CMat> ldlt(G);
    if (lam == 0.0) {
        Eigen::JacobiSVD<CMat> svd(A);
        RVec sv = svd.singularValues();
        double cutoff = std::max(A.rows(), A.cols()) * std::numeric_limits<double>::epsilon() * sv(0);
        if (sv(sv.size() - 1) <= cutoff)
            throw std::runtime_error("ridge_solve: singular normal matrix at lam = 0");
    }
    return ldlt.solve(A.adjoint() * b);
}

}  // namespace hsdest
