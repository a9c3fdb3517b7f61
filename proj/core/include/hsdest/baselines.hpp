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

#include "hsdest/hals_solver.hpp"
#include "hsdest/types.hpp"

namespace hsdest {

/// Closed-form demixing with known sparse support.
struct GenieResult {
    CVec h_s_ge;
    CVec h_d_ge;
    CVec gamma_ge;
    double mu = 0.0;
};

/// Vanilla atomic norm denoising: same contract as solve_p1 with the
/// diffuse term removed (gamma identically zero).
HalsSolution solve_anm(const CVec& y_avg, double tau, const SolverOptions& opts = {});

/// h_d = D T^{-1} D^H Pperp y, h_s = P (I - D T^{-1} D^H Pperp) y with
/// P = A A^+, Pperp = I - P, T = D^H Pperp D + mu I.
GenieResult genie_estimate(const CVec& y_avg, const CMat& A_true, const CMat& D, double mu);

/// Unstructured least-squares estimate of the channel (the measurement).
CVec ls_estimate(const CVec& y_avg);

}  // namespace hsdest
