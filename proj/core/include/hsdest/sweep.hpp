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
#include <string>
#include <vector>

#include "hsdest/config.hpp"
#include "hsdest/metrics.hpp"

namespace hsdest {

/// Reference bound columns attached to every scenario point (NaN when the
/// quantity is undefined for the scenario).
struct CrbColumns {
    double nmse_h = std::numeric_limits<double>::quiet_NaN();
    double nmse_hs = std::numeric_limits<double>::quiet_NaN();
    double nmse_hd = std::numeric_limits<double>::quiet_NaN();
    double f_mean = std::numeric_limits<double>::quiet_NaN();
    double alpha_mean = std::numeric_limits<double>::quiet_NaN();
    double gamma_mean = std::numeric_limits<double>::quiet_NaN();
    double env_f_lo = std::numeric_limits<double>::quiet_NaN();
    double env_f_hi = std::numeric_limits<double>::quiet_NaN();
    double env_alpha_lo = std::numeric_limits<double>::quiet_NaN();
    double env_alpha_hi = std::numeric_limits<double>::quiet_NaN();
    double env_gamma_lo = std::numeric_limits<double>::quiet_NaN();
    double env_gamma_hi = std::numeric_limits<double>::quiet_NaN();
};

/// One scenario point: keys, reference bounds, per-estimator aggregates.
struct SweepRow {
    double snr_db = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    double n_delta = std::numeric_limits<double>::quiet_NaN();
    int m = 0;
    double sigma_mean = std::numeric_limits<double>::quiet_NaN();
    CrbColumns crb;
    std::vector<AggregateRow> est;  ///< parallel to SweepResult::estimators
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<Estimator> estimators;
    std::vector<SweepRow> rows;
};

/// Monte Carlo orchestration over the configured scenario. Deterministic
/// for a fixed (config, seed) regardless of the worker count: per-trial
/// streams derive from (seed, point, channel, noise) and aggregation runs
/// in fixed order after all trials complete.
SweepResult run_sweep(const ExperimentConfig& cfg, int workers = 1);

}  // namespace hsdest
