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

/// Generator of a Hermitian Toeplitz matrix (first column, entry 0 real).
struct ToeplitzGen {
    CVec iota;
};

/// Expand a generator into the full Hermitian Toeplitz matrix.
CMat toeplitz_from_gen(const CVec& iota);

/// Adjoint of the Toeplitz embedding: g[0] = trace(M), g[d] = 2 * (sum of
/// the d-th subdiagonal), so that Re<g, x> = Re tr(M^H Toep(x)) for all
/// admissible x. Rejects inputs that are not Hermitian within hermitian_tol.
CVec toeplitz_adjoint(const CMat& M, double hermitian_tol = 1e-10);

/// Frobenius-nearest PSD matrix: eigendecompose and clip negative
/// eigenvalues. The input is symmetrized first.
CMat psd_project(const CMat& H);

/// N x k matrix of steering vectors at the given frequencies.
CMat steering_matrix(const std::vector<double>& freqs, int N);

/// Orthogonal projector onto the column space of A (tolerance-thresholded
/// pseudoinverse; k = 0 yields the zero matrix).
CMat col_projector(const CMat& A);

/// Moore-Penrose pseudoinverse with the standard cutoff
/// max(rows, cols) * eps * sigma_max.
CMat pinv(const CMat& A);

/// argmin ||b - A x||^2 + lam ||x||^2. For lam = 0 the matrix must have
/// full column rank; a rank deficiency raises std::runtime_error.
CVec ridge_solve(const CMat& A, const CVec& b, double lam);

}  // namespace hsdest
