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

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>

namespace hsdest {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Problem dimensions. N must be odd (symmetric subcarrier indexing).
struct ModelDims {
    int N = 0;  ///< number of subcarriers (odd)
    int L = 0;  ///< number of diffuse taps
    int m = 0;  ///< number of resolvable sparse paths
    int G = 1;  ///< number of pilot snapshots

    void validate() const {
        if (N < 1 || N % 2 == 0) throw std::invalid_argument("ModelDims: N must be odd and >= 1");
        if (L < 1) throw std::invalid_argument("ModelDims: L must be >= 1");
        if (m < 0) throw std::invalid_argument("ModelDims: m must be >= 0");
        if (G < 1) throw std::invalid_argument("ModelDims: G must be >= 1");
    }

    /// Parameter count of the complexified coordinate vector.
    int theta_size() const { return 3 * m + 2 * L; }
};

/// Rayleigh fading law for the path gains.
struct FadingConfig {
    double omega = 0.05;  ///< exponential power decay rate
    double beta = 0.01;   ///< diffuse relative power
    std::optional<double> delta_target;  ///< enforced minimum separation, if any

    void validate() const {
        if (!(omega > 0)) throw std::invalid_argument("FadingConfig: omega must be > 0");
        if (!(beta > 0)) throw std::invalid_argument("FadingConfig: beta must be > 0");
        if (delta_target && !(*delta_target > 0 && *delta_target < 0.5))
            throw std::invalid_argument("FadingConfig: delta_target must lie in (0, 1/2)");
    }
};

/// Total expected diffuse energy E||gamma||^2 under the fading law.
inline double expected_diffuse_energy(const FadingConfig& fading, int L) {
    double s = 0.0;
    for (int r = 0; r < L; ++r) s += fading.beta * std::exp(-fading.omega * r);
    return s;
}

}  // namespace hsdest
