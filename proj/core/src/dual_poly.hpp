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

// Internal helpers for evaluating and maximizing the dual trigonometric
// polynomial q(f) = <z, a(f)> = a(f)^H z over the frequency torus.

#pragma once

#include <cmath>
#include <vector>

#include "hsdest/types.hpp"

namespace hsdest::detail {

struct DualPolyEval {
    cxd q;    // q(f)
    cxd dq;   // q'(f)
    cxd ddq;  // q''(f)
};

inline DualPolyEval eval_dual_poly(const CVec& z, double f) {
    const int N = static_cast<int>(z.size());
    const double half = (N - 1) / 2.0;
    DualPolyEval e{{0, 0}, {0, 0}, {0, 0}};
    for (int k = 0; k < N; ++k) {
        double w = 2.0 * M_PI * (k - half);
        cxd ph(std::cos(w * f), -std::sin(w * f));  // exp(-j w f)
        cxd term = z(k) * ph;
        e.q += term;
        e.dq += cxd(0, -w) * term;
        e.ddq += -w * w * term;
    }
    return e;
}

inline double eval_abs_q(const CVec& z, double f) { return std::abs(eval_dual_poly(z, f).q); }

/// |q| sampled on the uniform grid j/grid, j = 0..grid-1, via per-tone rotations.
inline std::vector<double> sample_abs_q(const CVec& z, int grid) {
    const int N = static_cast<int>(z.size());
    const double half = (N - 1) / 2.0;
    std::vector<cxd> cur(N), step(N);
    for (int k = 0; k < N; ++k) {
        double w = 2.0 * M_PI * (k - half) / grid;
        cur[k] = z(k);
        step[k] = cxd(std::cos(w), -std::sin(w));
    }
    std::vector<double> out(grid);
    for (int j = 0; j < grid; ++j) {
        cxd s(0, 0);
        for (int k = 0; k < N; ++k) {
            s += cur[k];
            cur[k] *= step[k];
        }
        out[j] = std::abs(s);
    }
    return out;
}

/// Newton ascent on |q(f)|^2 starting at f0. Damped half-steps on
/// non-increase, at most max_iters steps, stop at |df| <= 1e-12.
inline double refine_peak(const CVec& z, double f0, int max_iters = 30) {
    double f = f0;
    double g0 = eval_abs_q(z, f);
    g0 *= g0;
    for (int it = 0; it < max_iters; ++it) {
        DualPolyEval e = eval_dual_poly(z, f);
        double g = std::norm(e.q);
        double gp = 2.0 * (std::conj(e.q) * e.dq).real();
        double gpp = 2.0 * (std::norm(e.dq) + (std::conj(e.q) * e.ddq).real());
        if (gpp >= 0.0) break;  // not at a local max basin
        double df = -gp / gpp;
        double cap = 0.5 / static_cast<double>(z.size());
        if (df > cap) df = cap;
        if (df < -cap) df = -cap;
        int halvings = 0;
        double fn = f + df;
        double gn = eval_abs_q(z, fn);
        gn *= gn;
        while (gn < g && halvings < 20) {
            df *= 0.5;
            fn = f + df;
            gn = eval_abs_q(z, fn);
            gn *= gn;
            ++halvings;
        }
        if (gn < g) break;
        f = fn;
        if (std::abs(df) <= 1e-12) break;
    }
    return f;
}

struct Peak {
    double f;
    double value;  // |q(f)| after refinement
};

/// All refined local maxima of |q| above min_value (grid scan + Newton).
inline std::vector<Peak> scan_local_maxima(const CVec& z, int grid, double min_value) {
    std::vector<double> s = sample_abs_q(z, grid);
    std::vector<Peak> peaks;
    for (int j = 0; j < grid; ++j) {
        double prev = s[(j + grid - 1) % grid];
        double next = s[(j + 1) % grid];
        if (s[j] >= prev && s[j] > next && s[j] > 0.0) {
            double f = refine_peak(z, static_cast<double>(j) / grid);
            double v = eval_abs_q(z, f);
            if (v >= min_value) peaks.push_back({f, v});
        }
    }
    return peaks;
}

/// Global maximum of |q| over the torus (refines every competitive grid peak).
inline Peak max_abs_q(const CVec& z, int grid) {
    std::vector<double> s = sample_abs_q(z, grid);
    double gmax = 0.0;
    for (double v : s) gmax = std::max(gmax, v);
    if (gmax == 0.0) return {0.0, 0.0};
    Peak best{0.0, -1.0};
    for (int j = 0; j < grid; ++j) {
        double prev = s[(j + grid - 1) % grid];
        double next = s[(j + 1) % grid];
        if (s[j] >= prev && s[j] >= next && s[j] >= 0.98 * gmax) {
            double f = refine_peak(z, static_cast<double>(j) / grid);
            double v = eval_abs_q(z, f);
            if (v > best.value) best = {f, v};
        }
    }
    return best;
}

}  // namespace hsdest::detail
