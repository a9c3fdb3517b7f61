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

#include "hsdest/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "hsdest/signal_model.hpp"

namespace hsdest {

double nmse(const CVec& truth, const CVec& est) {
    if (truth.size() != est.size()) throw std::invalid_argument("nmse: length mismatch");
    double denom = truth.squaredNorm();
    if (!(denom > 0)) throw std::invalid_argument("nmse: zero truth, use an unnormalized MSE");
    return (truth - est).squaredNorm() / denom;
}

std::pair<double, double> thresholded_mse(const std::vector<double>& est_f, const CVec& est_alpha,
                                          const std::vector<bool>& kept,
                                          const std::vector<double>& truth_f,
                                          const CVec& truth_alpha, const std::vector<int>& perm) {
    const int n = static_cast<int>(est_f.size());
    if (n == 0) throw std::invalid_argument("thresholded_mse: undefined for an empty estimate set");
    if (static_cast<int>(kept.size()) != n || static_cast<int>(perm.size()) != n ||
        est_alpha.size() != n)
        throw std::invalid_argument("thresholded_mse: inconsistent input sizes");

    double sf = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!kept[i]) continue;
        const int j = perm[i];
        if (j < 0 || j >= static_cast<int>(truth_f.size()))
            throw std::invalid_argument("thresholded_mse: permutation index out of range");
        double df = wrap_distance(est_f[i], truth_f[j]);
        sf += df * df;
        sa += std::norm(est_alpha(i) - truth_alpha(j));
    }
    return {sf / n, sa / n};
}

AggregateRow aggregate_weighted(const std::vector<TrialMetrics>& trials) {
    AggregateRow row;
    double w_sum = 0.0;
    double th_f = 0.0, th_a = 0.0, cth_f = 0.0, cth_a = 0.0;
    long kept_total = 0, est_total = 0;
    int n_valid = 0;

    for (const TrialMetrics& t : trials) {
        ++row.trials;
        if (t.failed) {
            ++row.failures;
            continue;
        }
        ++n_valid;
        row.nmse_h += t.nmse_h;
        row.nmse_hs += t.nmse_hs;
        row.nmse_hd += t.nmse_hd;
        row.mse_gamma += t.mse_gamma;
        if (t.threshold_valid) {
            ++row.threshold_trials;
            est_total += t.est_count;
            kept_total += t.kept_count;
            const double w = static_cast<double>(t.kept_count);
            if (w > 0) {
                w_sum += w;
                th_f += w * t.mse_th_f;
                th_a += w * t.mse_th_alpha;
                cth_f += w * t.crb_th_f;
                cth_a += w * t.crb_th_alpha;
            }
        }
    }
    if (n_valid == 0) throw std::runtime_error("aggregate_weighted: no valid trial");

    row.nmse_h /= n_valid;
    row.nmse_hs /= n_valid;
    row.nmse_hd /= n_valid;
    row.mse_gamma /= n_valid;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mse_th_f = w_sum > 0 ? th_f / w_sum : nan;
    row.mse_th_alpha = w_sum > 0 ? th_a / w_sum : nan;
    row.crb_th_f = w_sum > 0 ? cth_f / w_sum : nan;
    row.crb_th_alpha = w_sum > 0 ? cth_a / w_sum : nan;
    row.retained_fraction =
        est_total > 0 ? static_cast<double>(kept_total) / static_cast<double>(est_total) : nan;
    return row;
}

}  // namespace hsdest
