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

#include "hsdest/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dual_poly.hpp"
#include "hsdest/signal_model.hpp"
#include "hsdest/structured_linalg.hpp"

namespace hsdest {

namespace {

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// potentials formulation, O(rows^2 * cols).
std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

int nearest_truth(double f, const std::vector<double>& f_true) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(f_true.size()); ++j) {
        double d = wrap_distance(f, f_true[j]);
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    return best;
}

}  // namespace

std::vector<double> extract_support(const CVec& z, double tau, int grid_size, double eps_accept) {
    if (!(tau > 0)) throw std::invalid_argument("extract_support: tau must be > 0");
    const int N = static_cast<int>(z.size());
    if (z.norm() == 0.0) return {};

    std::vector<detail::Peak> peaks =
        detail::scan_local_maxima(z, grid_size, (1.0 - eps_accept) * tau);
    std::sort(peaks.begin(), peaks.end(),
              [](const detail::Peak& a, const detail::Peak& b) { return a.f < b.f; });

    // merge maxima closer than 0.25/N, keeping the larger value (circular)
    const double merge_dist = 0.25 / N;
    std::vector<detail::Peak> merged;
    for (const auto& p : peaks) {
        if (!merged.empty() && wrap_distance(merged.back().f, p.f) < merge_dist) {
            if (p.value > merged.back().value) merged.back() = p;
        } else {
            merged.push_back(p);
        }
    }
    while (merged.size() > 1 && wrap_distance(merged.front().f, merged.back().f) < merge_dist) {
        if (merged.back().value > merged.front().value) merged.front() = merged.back();
        merged.pop_back();
    }

    std::vector<double> freqs;
    freqs.reserve(merged.size());
    for (const auto& p : merged) freqs.push_back(p.f);
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

std::pair<CVec, CVec> debias(const CVec& y_avg, const CMat& D, const CVec& gamma_hat,
                             const std::vector<double>& freqs) {
    const int N = static_cast<int>(y_avg.size());
    CVec u = y_avg;
    if (D.cols() > 0 && gamma_hat.size() == D.cols()) u -= D * gamma_hat;
    if (freqs.empty()) return {CVec::Zero(N), CVec(0)};
    CMat A = steering_matrix(freqs, N);
    CVec amps = pinv(A) * u;
    return {A * amps, amps};
}

std::vector<bool> threshold_support(const CVec& amps, const CVec& gamma_hat) {
    double gmax = 0.0;
    for (int r = 0; r < gamma_hat.size(); ++r) gmax = std::max(gmax, std::abs(gamma_hat(r)));
    std::vector<bool> kept(amps.size());
    for (int i = 0; i < amps.size(); ++i) kept[i] = std::abs(amps(i)) >= gmax;
    return kept;
}

MatchResult match_to_truth(const std::vector<double>& freqs_est, const std::vector<bool>& kept,
                           const std::vector<double>& f_true) {
    const int n_est = static_cast<int>(freqs_est.size());
    const int m = static_cast<int>(f_true.size());
    if (m < 1) throw std::invalid_argument("match_to_truth: ground truth must be nonempty");
    if (static_cast<int>(kept.size()) != n_est)
        throw std::invalid_argument("match_to_truth: kept mask size mismatch");

    std::vector<int> kept_idx;
    for (int i = 0; i < n_est; ++i)
        if (kept[i]) kept_idx.push_back(i);
    const int k = static_cast<int>(kept_idx.size());

    MatchResult res;
    res.perm.assign(n_est, 0);
    for (int i = 0; i < n_est; ++i) res.perm[i] = nearest_truth(freqs_est[i], f_true);

    if (k == 0) return res;

    if (k <= m) {
        Eigen::MatrixXd cost(k, m);
        for (int a = 0; a < k; ++a)
            for (int j = 0; j < m; ++j) {
                double d = wrap_distance(freqs_est[kept_idx[a]], f_true[j]);
                cost(a, j) = d * d;
            }
        std::vector<int> asg = hungarian(cost);
        for (int a = 0; a < k; ++a) res.perm[kept_idx[a]] = asg[a];
    } else {
        // more kept estimates than truths: injective match for the best m,
        // the surplus goes to the nearest truth with reuse
        Eigen::MatrixXd cost(m, k);
        for (int j = 0; j < m; ++j)
            for (int a = 0; a < k; ++a) {
                double d = wrap_distance(freqs_est[kept_idx[a]], f_true[j]);
                cost(j, a) = d * d;
            }
        std::vector<int> asg = hungarian(cost);  // truth -> kept estimate
        for (int j = 0; j < m; ++j) res.perm[kept_idx[asg[j]]] = j;
        res.surplus_reuse = true;
    }

    res.cost = 0.0;
    for (int i = 0; i < n_est; ++i) {
        if (!kept[i]) continue;
        double d = wrap_distance(freqs_est[i], f_true[res.perm[i]]);
        res.cost += d * d;
    }
    return res;
}

SeDecomposition se_decomposition_check(const CVec& h_s_true, const CVec& gamma_true,
                                       const CVec& gamma_hat, const CVec& h_s_hat,
                                       const std::vector<double>& freqs, const CVec& noise_avg,
                                       const CVec& y_avg, const CMat& D) {
    const int N = static_cast<int>(y_avg.size());
    CMat P = col_projector(steering_matrix(freqs, N));

    CVec w = h_s_true;
    if (D.cols() > 0) w += D * (gamma_true - gamma_hat);

    CVec h_s_b = P * h_s_hat;  // in-span part of the biased estimate
    CVec e_b = w - h_s_b;

    CVec u = y_avg;
    if (D.cols() > 0) u -= D * gamma_hat;
    CVec h_db = P * u;
    // h* - (h_db + D gamma_hat) = h_s* + D(gamma* - gamma_hat) - h_db
    CVec h_total_err = h_s_true - h_db;
    if (D.cols() > 0) h_total_err += D * (gamma_true - gamma_hat);

    SeDecomposition out;
    out.se_b = e_b.squaredNorm();
    out.se_db = h_total_err.squaredNorm();
    out.proj_eb_sq = (P * e_b).squaredNorm();
    out.proj_noise_sq = (P * noise_avg).squaredNorm();
    out.off_span_hs = (h_s_hat - h_s_b).norm();

    double rhs = out.se_b - out.proj_eb_sq + out.proj_noise_sq;
    double diff = std::abs(out.se_db - rhs);
    double denom = std::max({out.se_db, out.se_b, 1e-300});
    out.rel_residual = diff == 0.0 ? 0.0 : diff / denom;
    return out;
}

}  // namespace hsdest
