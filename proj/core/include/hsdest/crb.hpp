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

#pragma once

#include <vector>

#include "hsdest/types.hpp"

namespace hsdest {

/// Fisher information for the complexified parameter vector
/// theta = [f; alpha; gamma; conj(alpha); conj(gamma)].
struct FimTheta {
    CMat matrix;  ///< (3m+2L) x (3m+2L), Hermitian PSD
    int m = 0;
    int L = 0;
    int N = 0;
    int G = 1;
    double sigma = 0.0;
};

/// Per-parameter bounds (diagonal of the inverse FIM, plotting convention:
/// alpha/gamma entries are read from the non-conjugate blocks).
struct CrbParams {
    RVec crb_f;      ///< size m
    RVec crb_alpha;  ///< size m
    RVec crb_gamma;  ///< size L
    double condition_number = 0.0;
    bool ill_conditioned = false;  ///< condition number above 1e12
};

/// Separation-dependent envelopes around the parameter bounds.
struct CrbEnvelopes {
    double k_min = 0.0;
    double k_max = 0.0;
    RVec f_lo, f_hi;  ///< per spike (scale with |alpha_i|^-2)
    double alpha_lo = 0.0, alpha_hi = 0.0;
    double gamma_lo = 0.0, gamma_hi = 0.0;
};

/// Bound on the stacked channel vector [h; conj(h)].
struct CrbChannel {
    CMat matrix;             ///< (sigma^2/G) * P_U, 2N x 2N
    double trace_value = 0.0;      ///< equals (sigma^2/G)(3m+2L)
    double half_trace = 0.0;       ///< lower bound on E||h - h_hat||^2
};

/// Bound on the stacked component vector [h_s; h_d; conj(h_s); conj(h_d)].
struct CrbComponents {
    CMat matrix;  ///< 4N x 4N PSD
    double sparse_trace = 0.0;   ///< trace of the h_s diagonal block
    double diffuse_trace = 0.0;  ///< trace of the h_d diagonal block
};

/// Extreme singular values of the structured stacking.
struct InterlacingReport {
    double smin_q0 = 0.0, smax_q0 = 0.0;
    double smin_q1 = 0.0, smax_q1 = 0.0;
    bool min_ok = false;  ///< smin(Q1) >= smin(Q0)
    bool max_ok = false;  ///< smax(Q1) <= smax(Q0)
};

/// Diagonal derivative operator: entry k is j*2*pi*(k - (N-1)/2), so that
/// lambda_matrix(N) * a(f) is the exact frequency derivative of a(f).
CMat lambda_matrix(int N);

/// Derivative matrix U = d[h; conj(h)]/d theta, 2N x (3m+2L).
CMat build_u_matrix(const std::vector<double>& f, const CVec& alpha, int N, int L);

/// FIM under unitary pilots: G * sigma^-2 * U^H U.
FimTheta fim_theta(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                   double sigma);

/// Diagonal of the inverse FIM mapped to the (f, alpha, gamma) families.
CrbParams crb_parameters(const FimTheta& fim);

/// Envelopes with K_min = 1/(G(1 + 2/(N delta))), K_max = 1/(G(1 - 2/(N delta))).
/// Requires N*delta > 2.
CrbEnvelopes crb_bounds(int N, double delta, int G, double sigma, const CVec& alpha);

/// CRB(h^<>) = (sigma^2/G) * U U^+ and its traces.
CrbChannel crb_channel(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                       double sigma);

/// CRB of the stacked components, (sigma^2/G) * V (U^H U)^-1 V^H.
CrbComponents crb_components(const std::vector<double>& f, const CVec& alpha, int N, int L, int G,
                             double sigma);

/// Builds Q0 = [sqrt(2) B0, B1] and Q1 = [[B0, B1, 0], [conj(B0), 0, conj(B1)]]
/// and reports their extreme singular values. Requires 2N >= 3(m+L) and Q0
/// of full column rank.
InterlacingReport interlacing_check(const CMat& B0, const CMat& B1);

/// C_N = sqrt(pi^2 N (N-1)(N+1) / 3) = ||lambda_matrix(N) a(f)||_2 for all f.
double scaling_constant_cn(int N);

}  // namespace hsdest
