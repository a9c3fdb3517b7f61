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

#include <string>
#include <vector>

#include "hsdest/types.hpp"

namespace hsdest {

/// Options for the splitting solver. The semidefinite block is handled by
/// ADMM with consensus splitting over the Toeplitz-PSD cone; when `polish`
/// is set, the converged support is refined by a fully corrective step
/// that certifies optimality through the dual polynomial.
struct SolverOptions {
    double rho = 1.0;               ///< initial augmented-Lagrangian penalty
    int max_iters = 50000;
    double eps_abs = 1e-7;
    double eps_rel = 1e-6;
    bool adaptive_rho = true;       ///< ratio rule, factor 2, bounds [1e-4, 1e4]
    double relax = 1.6;             ///< over-relaxation parameter
    bool polish = true;
    double localization_tol = 1e-4; ///< ADMM exit tolerance when polishing
    int admm_budget = 300;          ///< ADMM iteration cap for the localization pass
    int polish_max_rounds = 120;
    int grid_size = 1 << 14;        ///< dual polynomial scan resolution
};

/// Regularization weights. tau multiplies the atomic norm under the
/// convention ||a(f)||_A = 1, i.e. the SDP value is (t + iota_1)/2.
struct Hyperparams {
    double tau = 0.0;
    double lam = 0.0;
    double e_d = 0.0;
};

/// Primal/dual output of one solve.
struct HalsSolution {
    CVec h_s;          ///< sparse-part estimate
    CVec gamma;        ///< diffuse coefficients
    double t = 0.0;    ///< SDP scalar block
    CVec iota;         ///< Hermitian Toeplitz generator
    CVec z;            ///< residual y_avg - h_s - D*gamma
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double gap = 0.0;
    double tau = 0.0;  ///< effective weights used by the solve
    double lam = 0.0;
    int iters = 0;
    bool converged = false;
    std::string message;

    double atomic_value() const {
        return 0.5 * (t + (iota.size() > 0 ? iota(0).real() : 0.0));
    }
};

/// Stationarity residuals of a solution (values only; thresholds are the
/// caller's business).
struct OptimalityDiagnostics {
    double dual_norm_value = 0.0;       ///< ||z||_A^*
    double dual_excess_rel = 0.0;       ///< max(0, ||z||_A^* - tau) / tau
    double ridge_residual = 0.0;        ///< ||D^H z - lam*gamma||_2
    double ridge_residual_rel = 0.0;
    double alignment_residual = 0.0;    ///< |Re<z, h_s> - tau*||h_s||_A|
    double alignment_residual_rel = 0.0;

    double max_rel() const {
        double r = dual_excess_rel;
        if (ridge_residual_rel > r) r = ridge_residual_rel;
        if (alignment_residual_rel > r) r = alignment_residual_rel;
        return r;
    }
};

/// Result of the tau search.
struct TuneResult {
    Hyperparams hp;
    int achieved_support = 0;
    bool matched = false;
    std::string log;
};

/// tau = tau_scale * sigma * sqrt(N log N) (natural log),
/// lam = lam_scale * N * sigma^2 / E||gamma||^2,
/// e_d = E||gamma||^2 * ed_headroom.
Hyperparams select_hyperparams(int N, double sigma, double expected_gamma_energy,
                               double tau_scale = 1.0, double lam_scale = 1.0,
                               double ed_headroom = 2.0);

/// Regularized estimator: minimize
///   0.5*||y - h_s - D*gamma||^2 + tau*||h_s||_A + 0.5*lam*||gamma||^2.
/// D may have zero columns, in which case the gamma block is absent.
HalsSolution solve_p1(const CVec& y_avg, const CMat& D, const Hyperparams& hp,
                      const SolverOptions& opts = {});

/// Energy-constrained estimator: outer search on lam so that
/// ||gamma||^2 = e_d when the constraint binds (1% tolerance); returns the
/// small-lam solution when it does not. e_d = 0 reduces to vanilla ANM.
HalsSolution solve_p2(const CVec& y_avg, const CMat& D, double tau, double e_d,
                      const SolverOptions& opts = {});

/// Noiseless demixing: minimize ||y - D*gamma||_A through the
/// equality-constrained semidefinite program.
HalsSolution solve_p0(const CVec& y_avg, const CMat& D, const SolverOptions& opts = {});

/// Stationarity residuals of a P1/P2 solution.
OptimalityDiagnostics check_optimality(const HalsSolution& sol, const CVec& y_avg,
                                       const CMat& D, const Hyperparams& hp);

/// 0.5*||y||^2 - 0.5*||y - z||^2 - ||D^H z||^2/(2*lam). The last term is
/// dropped when D has no columns.
double dual_objective(const CVec& z, const CVec& y_avg, const CMat& D, double lam);

/// primal_obj - dual_objective at the solution's own residual.
double duality_gap(const HalsSolution& sol, const CVec& y_avg, const CMat& D);

/// max_f |<z, a(f)>| via dense grid scan plus Newton refinement.
double dual_atomic_norm(const CVec& z, int grid_size = 1 << 14);

/// Geometric search on tau targeting a thresholded support of size
/// target_m (start sigma*sqrt(N log N), factor 1.5, at most 20 probes).
TuneResult tune_tau(const CVec& y_avg, const CMat& D, int target_m, double e_d,
                    double sigma, const SolverOptions& opts = {});

}  // namespace hsdest
