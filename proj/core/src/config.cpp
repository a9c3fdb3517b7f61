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

#include "hsdest/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hsdest {

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::HalsP1: return "hals_p1";
        case Estimator::HalsP2: return "hals_p2";
        case Estimator::Anm: return "anm";
        case Estimator::Genie: return "genie";
        case Estimator::Ls: return "ls";
    }
    return "?";
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "hals_p1") return Estimator::HalsP1;
    if (name == "hals_p2") return Estimator::HalsP2;
    if (name == "anm") return Estimator::Anm;
    if (name == "genie") return Estimator::Genie;
    if (name == "ls") return Estimator::Ls;
    throw std::invalid_argument("unknown estimator: " + name);
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw std::invalid_argument("config: bad flag for " + key + ": " + v);
}

}  // namespace

void ExperimentConfig::validate() const {
    dims.validate();
    fading.validate();
    if (estimators.empty()) throw std::invalid_argument("config: estimators must be nonempty");
    if (trials_channel < 1 || trials_noise < 1)
        throw std::invalid_argument("config: trial counts must be >= 1");
    if (scenario != "snr_sweep" && scenario != "separation_sweep" && scenario != "order_sweep" &&
        scenario != "trace_eval")
        throw std::invalid_argument("config: unknown scenario: " + scenario);
    if (scenario == "snr_sweep" || scenario == "trace_eval") {
        if (snr_db_list.empty()) throw std::invalid_argument("config: snr_db_list must be nonempty");
    }
    if (scenario == "separation_sweep") {
        if (delta_list.empty()) throw std::invalid_argument("config: delta_list must be nonempty");
        if (snr_db_list.empty())
            throw std::invalid_argument("config: separation_sweep needs one snr_db_list value");
    }
    if (scenario == "order_sweep") {
        if (m_list.empty()) throw std::invalid_argument("config: m_list must be nonempty");
        if (snr_db_list.empty())
            throw std::invalid_argument("config: order_sweep needs one snr_db_list value");
        for (int m : m_list)
            if (m < 1 || m > dims.L)
                throw std::invalid_argument("config: m_list entries must lie in [1, L]");
    }
    if (scenario == "trace_eval") {
        if (trace_path.empty()) throw std::invalid_argument("config: trace_eval needs trace_path");
        for (Estimator e : estimators)
            if (e == Estimator::Genie)
                throw std::invalid_argument("config: genie needs ground truth, not available in trace_eval");
    } else {
        if (dims.m >= 1 && !(delta > 0 && delta <= 0.5 / dims.L))
            throw std::invalid_argument("config: delta must lie in (0, 1/(2L)]");
        for (double d : delta_list)
            if (!(d > 0 && d <= 0.5 / dims.L))
                throw std::invalid_argument("config: delta_list entries must lie in (0, 1/(2L)]");
        if (dims.m > dims.L)
            throw std::invalid_argument("config: m must be <= L for grid-offset placement");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value: " + s);
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));

        if (key == "N") cfg.dims.N = static_cast<int>(to_long(key, val));
        else if (key == "L") cfg.dims.L = static_cast<int>(to_long(key, val));
        else if (key == "m") cfg.dims.m = static_cast<int>(to_long(key, val));
        else if (key == "G") cfg.dims.G = static_cast<int>(to_long(key, val));
        else if (key == "omega") cfg.fading.omega = to_double(key, val);
        else if (key == "beta") cfg.fading.beta = to_double(key, val);
        else if (key == "delta") cfg.delta = to_double(key, val);
        else if (key == "delta_list") {
            cfg.delta_list.clear();
            for (const auto& v : split_csv(val)) cfg.delta_list.push_back(to_double(key, v));
        } else if (key == "snr_db_list") {
            cfg.snr_db_list.clear();
            for (const auto& v : split_csv(val)) cfg.snr_db_list.push_back(to_double(key, v));
        } else if (key == "m_list") {
            cfg.m_list.clear();
            for (const auto& v : split_csv(val)) cfg.m_list.push_back(static_cast<int>(to_long(key, v)));
        } else if (key == "trials_channel") cfg.trials_channel = static_cast<int>(to_long(key, val));
        else if (key == "trials_noise") cfg.trials_noise = static_cast<int>(to_long(key, val));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
        else if (key == "tau_scale") cfg.tau_scale = to_double(key, val);
        else if (key == "lam_scale") cfg.lam_scale = to_double(key, val);
        else if (key == "ed_headroom") cfg.ed_headroom = to_double(key, val);
        else if (key == "tune_tau") cfg.tune_tau = to_bool(key, val);
        else if (key == "estimators") {
            cfg.estimators.clear();
            for (const auto& v : split_csv(val)) cfg.estimators.push_back(estimator_from_name(v));
        } else if (key == "scenario") cfg.scenario = val;
        else if (key == "trace_path") cfg.trace_path = val;
        else throw std::invalid_argument("config: unknown key at line " + std::to_string(lineno) +
                                         ": " + key);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace hsdest
