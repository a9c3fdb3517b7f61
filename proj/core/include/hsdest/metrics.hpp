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

#include <limits>
#include <vector>

#include "hsdest/types.hpp"

namespace hsdest {

/// Metrics of a single (channel, noise) trial for one estimator. Fields
/// that do not apply stay NaN.
struct TrialMetrics {
    double nmse_h = std::numeric_limits<double>::quiet_NaN();
    double nmse_hs = std::numeric_limits<double>::quiet_NaN();
    double nmse_hd = std::numeric_limits<double>::quiet_NaN();
    double mse_gamma = std::numeric_limits<double>::quiet_NaN();
    double mse_th_f = std::numeric_limits<double>::quiet_NaN();
    double mse_th_alpha = std::numeric_limits<double>::quiet_NaN();
    double crb_th_f = std::numeric_limits<double>::quiet_NaN();
    double crb_th_alpha = std::numeric_limits<double>::quiet_NaN();
    int kept_count = 0;
    int est_count = 0;
    bool threshold_valid = false;  ///< est_count > 0 and threshold metrics defined
    bool failed = false;           ///< solver failure; excluded from all aggregates
};

/// Aggregate of one scenario point for one estimator. NMSE/MSE columns are
/// uniform means over non-failed trials; thresholded columns are weighted
/// by the per-trial kept count.
struct AggregateRow {
    double nmse_h = 0, nmse_hs = 0, nmse_hd = 0, mse_gamma = 0;
    double mse_th_f = 0, mse_th_alpha = 0, crb_th_f = 0, crb_th_alpha = 0;
    double retained_fraction = 0;
    int failures = 0;
    int trials = 0;
    int threshold_trials = 0;
};

/// ||truth - est||^2 / ||truth||^2. Throws on zero truth.
double nmse(const CVec& truth, const CVec& est);

/// Thresholded frequency/amplitude squared errors: the sum runs over kept
/// estimates, the divisor is the total estimate count |T|.
std::pair<double, double> thresholded_mse(const std::vector<double>& est_f, const CVec& est_alpha,
                                          const std::vector<bool>& kept,
                                          const std::vector<double>& truth_f,
                                          const CVec& truth_alpha, const std::vector<int>& perm);

/// Fold a set of trials into one row. Throws when no valid trial exists.
AggregateRow aggregate_weighted(const std::vector<TrialMetrics>& trials);

}  // namespace hsdest
