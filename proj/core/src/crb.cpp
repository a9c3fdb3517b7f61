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

#include "hsdest/crb.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "hsdest/signal_model.hpp"
#include "hsdest/structured_linalg.hpp"

namespace hsdest {

namespace {

// Hermitian inverse through an eigendecomposition; reports conditioning and
// throws with a precondition hint when the matrix is numerically singular.
CMat invert_hermitian(const CMat& M, double& cond, const char* who) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (M + M.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error(std::string(who) + ": eigendecomposition failed");
    const RVec& ev = es.eigenvalues();
    const double lmax = ev.maxCoeff();
    const double lmin = ev.minCoeff();
    if (!(lmax > 0) || lmin <= lmax * 1e-15)
        throw std::runtime_error(
            std::string(who) +
            ": singular FIM; check 3m+2L <= 2N, alpha_i != 0 and distinct supports");
    cond = lmax / lmin;
    RVec inv = ev.cwiseInverse();
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

CMat lambda_matrix(int N) {
    if (N < 1 || N % 2 == 0) throw std::invalid_argument("lambda_matrix: N must be odd and >= 1");
    CMat Lm = CMat::Zero(N, N);
    const double half = (N - 1) / 2.0;
    for (int k = 0; k < N; ++k) Lm(k, k) = cxd(0.0, 2.0 * M_PI * (k - half));
    return Lm;
}

CMat build_u_matrix(const std::vector<double>& f, const CVec& alpha, int N, int L) {
    const int m = static_cast<int>(f.size());
    if (alpha.size() != m) throw std::invalid_argument("build_u_matrix: alpha size mismatch");
    if (3 * m + 2 * L > 2 * N)
        throw std::invalid_argument("build_u_matrix: requires 3m + 2L <= 2N");

    CMat A = steering_matrix(f, N);
    CMat D = build_diffuse_basis(N, L);
    CMat Ap = lambda_matrix(N) * A * alpha.asDiagonal();  // A'_f

    CMat U = CMat::Zero(2 * N, 3 * m + 2 * L);
    U.block(0, 0, N, m) = Ap;
    U.block(0, m, N, m) = A;
    U.block(0, 2 * m, N, L) = D;
    U.block(N, 0, N, m) = Ap.conjugate();
    U.block(N, 2 * m + L, N, m) = A.conjugate();
    U.block(N, 3 * m + L, N, L) = D.conjugate();
    return U;
}

FimTheta fim_theta(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                   double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("fim_theta: sigma must be > 0");
    if (G < 1) throw std::invalid_argument("fim_theta: G must be >= 1");
    FimTheta out;
    CMat U = build_u_matrix(f, alpha, N, L);
    out.matrix = (static_cast<double>(G) / (sigma * sigma)) * (U.adjoint() * U);
    out.m = static_cast<int>(f.size());
    out.L = L;
    out.N = N;
    out.G = G;
    out.sigma = sigma;
    return out;
}

CrbParams crb_parameters(const FimTheta& fim) {
    CrbParams out;
    double cond = 0.0;
    CMat inv = invert_hermitian(fim.matrix, cond, "crb_parameters");
    out.condition_number = cond;
    out.ill_conditioned = cond > 1e12;

    const int m = fim.m, L = fim.L;
    out.crb_f = RVec(m);
    out.crb_alpha = RVec(m);
    out.crb_gamma = RVec(L);
    for (int i = 0; i < m; ++i) out.crb_f(i) = inv(i, i).real();
    for (int i = 0; i < m; ++i) out.crb_alpha(i) = inv(m + i, m + i).real();
    for (int r = 0; r < L; ++r) out.crb_gamma(r) = inv(2 * m + r, 2 * m + r).real();
    return out;
}

CrbEnvelopes crb_bounds(int N, double delta, int G, double sigma, const CVec& alpha) {
    const double nd = N * delta;
    if (!(nd > 2.0))
        throw std::invalid_argument("crb_bounds: envelope undefined for N*delta <= 2");
    CrbEnvelopes out;
    out.k_min = 1.0 / (G * (1.0 + 2.0 / nd));
    out.k_max = 1.0 / (G * (1.0 - 2.0 / nd));

    const double s2 = sigma * sigma;
    const double f_scale =
        3.0 / (2.0 * M_PI * M_PI * static_cast<double>(N) * (N - 1.0) * (N + 1.0));
    const int m = static_cast<int>(alpha.size());
    out.f_lo = RVec(m);
    out.f_hi = RVec(m);
    for (int i = 0; i < m; ++i) {
        double a2 = std::norm(alpha(i));
        out.f_lo(i) = out.k_min * s2 / a2 * f_scale;
        out.f_hi(i) = out.k_max * s2 / a2 * f_scale;
    }
    out.alpha_lo = out.k_min * s2 / N;
    out.alpha_hi = out.k_max * s2 / N;
    out.gamma_lo = out.alpha_lo;
    out.gamma_hi = out.alpha_hi;
    return out;
}

CrbChannel crb_channel(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                       double sigma) {
    CMat U = build_u_matrix(f, alpha, N, L);
    Eigen::JacobiSVD<CMat> svd(U, Eigen::ComputeThinU);
    const RVec& sv = svd.singularValues();
    double cutoff = std::max(U.rows(), U.cols()) * std::numeric_limits<double>::epsilon() * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    if (rank < U.cols()) throw std::runtime_error("crb_channel: U is rank deficient");

    CrbChannel out;
    const double scale = sigma * sigma / G;
    out.matrix = scale * (svd.matrixU().leftCols(rank) * svd.matrixU().leftCols(rank).adjoint());
    out.trace_value = out.matrix.trace().real();
    out.half_trace = 0.5 * out.trace_value;
    return out;
}

CrbComponents crb_components(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                             double sigma) {
    const int m = static_cast<int>(f.size());
    CMat U = build_u_matrix(f, alpha, N, L);

    CMat A = steering_matrix(f, N);
    CMat D = build_diffuse_basis(N, L);
    CMat Ap = lambda_matrix(N) * A * alpha.asDiagonal();

    const int p = 3 * m + 2 * L;
    CMat V = CMat::Zero(4 * N, p);
    V.block(0, 0, N, m) = Ap;
    V.block(0, m, N, m) = A;
    V.block(N, 2 * m, N, L) = D;
    V.block(2 * N, 0, N, m) = Ap.conjugate();
    V.block(2 * N, 2 * m + L, N, m) = A.conjugate();
    V.block(3 * N, 3 * m + L, N, L) = D.conjugate();

    double cond = 0.0;
    CMat inv = invert_hermitian(U.adjoint() * U, cond, "crb_components");

    CrbComponents out;
    out.matrix = (sigma * sigma / G) * (V * inv * V.adjoint());
    out.sparse_trace = out.matrix.topLeftCorner(N, N).trace().real();
    out.diffuse_trace = out.matrix.block(N, N, N, N).trace().real();
    return out;
}

InterlacingReport interlacing_check(const CMat& B0, const CMat& B1) {
    const int N = static_cast<int>(B0.rows());
    const int w = static_cast<int>(B0.cols());
    if (B1.rows() != N || B1.cols() != w)
        throw std::invalid_argument("interlacing_check: B0 and B1 must have equal shapes");
    if (2 * N < 3 * w) throw std::invalid_argument("interlacing_check: requires 2N >= 3(m+L)");

    CMat Q0(N, 2 * w);
    Q0.leftCols(w) = std::sqrt(2.0) * B0;
    Q0.rightCols(w) = B1;

    CMat Q1 = CMat::Zero(2 * N, 3 * w);
    Q1.block(0, 0, N, w) = B0;
    Q1.block(0, w, N, w) = B1;
    Q1.block(N, 0, N, w) = B0.conjugate();
    Q1.block(N, 2 * w, N, w) = B1.conjugate();

    Eigen::JacobiSVD<CMat> s0(Q0);
    Eigen::JacobiSVD<CMat> s1(Q1);

    InterlacingReport out;
    out.smax_q0 = s0.singularValues()(0);
    out.smin_q0 = s0.singularValues()(s0.singularValues().size() - 1);
    out.smax_q1 = s1.singularValues()(0);
    out.smin_q1 = s1.singularValues()(s1.singularValues().size() - 1);
    if (out.smin_q0 <= 0.0)
        throw std::invalid_argument("interlacing_check: Q0 must have full column rank");
    out.min_ok = out.smin_q1 >= out.smin_q0 * (1.0 - 1e-12);
    out.max_ok = out.smax_q1 <= out.smax_q0 * (1.0 + 1e-12);
    return out;
}

double scaling_constant_cn(int N) {
    if (N < 1 || N % 2 == 0)
        throw std::invalid_argument("scaling_constant_cn: N must be odd and >= 1");
    return std::sqrt(M_PI * M_PI * static_cast<double>(N) * (N - 1.0) * (N + 1.0) / 3.0);
}

}  // namespace hsdest
