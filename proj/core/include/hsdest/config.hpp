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

#include <cstdint>
#include <string>
#include <vector>

#include "hsdest/types.hpp"

namespace hsdest {

enum class Estimator { HalsP1, HalsP2, Anm, Genie, Ls };

const char* estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

/// Flat key=value experiment description. Lists are comma-separated,
/// '#' starts a comment line. Unknown keys are rejected.
struct ExperimentConfig {
    ModelDims dims{101, 20, 4, 1};
    FadingConfig fading{};
    double delta = 0.025;
    std::vector<double> delta_list;   ///< separation_sweep points
    std::vector<double> snr_db_list;  ///< snr_sweep / trace_eval points
    std::vector<int> m_list;          ///< order_sweep points
    int trials_channel = 50;
    int trials_noise = 100;
    std::uint64_t seed = 1;
    double tau_scale = 1.0;
    double lam_scale = 1.0;
    double ed_headroom = 2.0;
    bool tune_tau = false;
    std::vector<Estimator> estimators;
    std::string scenario;  ///< snr_sweep | separation_sweep | order_sweep | trace_eval
    std::string trace_path;

    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace hsdest
