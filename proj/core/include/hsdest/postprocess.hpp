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

#include <utility>
#include <vector>

#include "hsdest/types.hpp"

namespace hsdest {

/// Support estimate bundle: frequencies, matched amplitudes, kept mask.
struct SupportEstimate {
    std::vector<double> freqs;
    CVec amps;
    std::vector<bool> kept;
};

/// Truth-matching assignment. perm[i] is the ground-truth index matched to
/// estimate i. surplus_reuse flags the case of more kept estimates than
/// truths, where nearest-truth matching with reuse applies to the surplus.
struct MatchResult {
    std::vector<int> perm;
    double cost = 0.0;
    bool surplus_reuse = false;
};

/// Terms of the debiased-error decomposition.
struct SeDecomposition {
    double se_b = 0.0;          ///< squared error of the biased estimate
    double se_db = 0.0;         ///< squared error of the debiased estimate
    double proj_eb_sq = 0.0;    ///< ||P e_b||^2
    double proj_noise_sq = 0.0; ///< ||P n~||^2
    double rel_residual = 0.0;  ///< |se_db - (se_b - proj_eb_sq + proj_noise_sq)| / max(se_db, eps)
    double off_span_hs = 0.0;   ///< ||(I - P) h_s_hat||, in-span defect of the raw estimate
};

/// All local maximizers of |<z, a(f)>| with refined value >= (1-eps)*tau;
/// maxima closer than 0.25/N are merged (larger value wins). Result sorted.
std::vector<double> extract_support(const CVec& z, double tau, int grid_size = 1 << 14,
                                    double eps_accept = 1e-3);

/// Project y_avg - D*gamma_hat onto the span of the estimated steering
/// vectors. Returns (h_s_db, amps) with h_s_db = A_f * amps exactly.
/// Near-collinear supports are handled by the pseudoinverse cutoff.
std::pair<CVec, CVec> debias(const CVec& y_avg, const CMat& D, const CVec& gamma_hat,
                             const std::vector<double>& freqs);

/// kept[i] = (|amps[i]| >= max_r |gamma_hat[r]|). Empty gamma keeps all.
std::vector<bool> threshold_support(const CVec& amps, const CVec& gamma_hat);

/// Cost-minimal assignment of ground-truth indices to estimates under the
/// squared wrap-around distance, counting only kept estimates (Hungarian;
/// surplus kept estimates are matched to the nearest truth with reuse).
MatchResult match_to_truth(const std::vector<double>& freqs_est, const std::vector<bool>& kept,
                           const std::vector<double>& f_true);

/// Check the debiased-error decomposition
///   SE_db = SE_b - ||P e_b||^2 + ||P n~||^2
/// with P the projector onto span(A_freqs). The biased sparse estimate
/// h_s_hat is projected onto that span before forming e_b, which is the
/// exact-arithmetic reading of the identity (the optimal estimate lies in
/// the span; the defect of the raw iterate is reported separately).
SeDecomposition se_decomposition_check(const CVec& h_s_true, const CVec& gamma_true,
                                       const CVec& gamma_hat, const CVec& h_s_hat,
                                       const std::vector<double>& freqs, const CVec& noise_avg,
                                       const CVec& y_avg, const CMat& D);

}  // namespace hsdest
