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

#include "hsdest/baselines.hpp"

#include <Eigen/Dense>

#include "hsdest/structured_linalg.hpp"

namespace hsdest {

HalsSolution solve_anm(const CVec& y_avg, double tau, const SolverOptions& opts) {
    Hyperparams hp;
    hp.tau = tau;
    hp.lam = 0.0;
    return solve_p1(y_avg, CMat(y_avg.size(), 0), hp, opts);
}

GenieResult genie_estimate(const CVec& y_avg, const CMat& A_true, const CMat& D, double mu) {
    if (!(mu > 0)) throw std::invalid_argument("genie_estimate: mu must be > 0");
    const int N = static_cast<int>(y_avg.size());
    if (D.rows() != N || (A_true.cols() > 0 && A_true.rows() != N))
        throw std::invalid_argument("genie_estimate: dimension mismatch");

    CMat P = col_projector(A_true);
    CVec py_perp = y_avg - P * y_avg;

    CMat T = D.adjoint() * D - (D.adjoint() * P) * D;
    T.diagonal().array() += mu;

    GenieResult out;
    out.mu = mu;
    out.gamma_ge = T.ldlt().solve(D.adjoint() * py_perp);
    out.h_d_ge = D * out.gamma_ge;
    out.h_s_ge = P * (y_avg - out.h_d_ge);
    return out;
}

CVec ls_estimate(const CVec& y_avg) { return y_avg; }

}  // namespace hsdest
