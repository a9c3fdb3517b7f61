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

#include "hsdest/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hsdest {

namespace {

void put_double(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    out += buf;
}

void put_int(std::string& out, long v) { out += std::to_string(v); }

}  // namespace

std::string csv_to_string(const SweepResult& result) {
    if (result.rows.empty()) throw std::invalid_argument("csv: empty table");
    if (result.estimators.empty()) throw std::invalid_argument("csv: empty estimator list");

    std::string out;
    out += "scenario,snr_db,delta,n_delta,m,N,L,G,omega,beta,sigma_mean,trials_channel,trials_noise";
    out += ",crb_nmse_h,crb_nmse_hs,crb_nmse_hd,crb_f_mean,crb_alpha_mean,crb_gamma_mean";
    out += ",crb_env_f_lo,crb_env_f_hi,crb_env_alpha_lo,crb_env_alpha_hi,crb_env_gamma_lo,crb_env_gamma_hi";
    for (Estimator e : result.estimators) {
        const std::string p = estimator_name(e);
        for (const char* col :
             {"nmse_h", "nmse_hs", "nmse_hd", "mse_gamma", "mse_th_f", "mse_th_alpha", "crb_th_f",
              "crb_th_alpha", "retained_fraction", "failures"})
            out += "," + p + "_" + col;
    }
    out += "\n";

    const ExperimentConfig& cfg = result.config;
    for (const SweepRow& row : result.rows) {
        out += cfg.scenario;
        out += ',';
        put_double(out, row.snr_db);
        out += ',';
        put_double(out, row.delta);
        out += ',';
        put_double(out, row.n_delta);
        out += ',';
        put_int(out, row.m);
        out += ',';
        put_int(out, cfg.dims.N);
        out += ',';
        put_int(out, cfg.dims.L);
        out += ',';
        put_int(out, cfg.dims.G);
        out += ',';
        put_double(out, cfg.fading.omega);
        out += ',';
        put_double(out, cfg.fading.beta);
        out += ',';
        put_double(out, row.sigma_mean);
        out += ',';
        put_int(out, cfg.trials_channel);
        out += ',';
        put_int(out, cfg.trials_noise);
        for (double v : {row.crb.nmse_h, row.crb.nmse_hs, row.crb.nmse_hd, row.crb.f_mean,
                         row.crb.alpha_mean, row.crb.gamma_mean, row.crb.env_f_lo, row.crb.env_f_hi,
                         row.crb.env_alpha_lo, row.crb.env_alpha_hi, row.crb.env_gamma_lo,
                         row.crb.env_gamma_hi}) {
            out += ',';
            put_double(out, v);
        }
        for (const AggregateRow& a : row.est) {
            for (double v : {a.nmse_h, a.nmse_hs, a.nmse_hd, a.mse_gamma, a.mse_th_f, a.mse_th_alpha,
                             a.crb_th_f, a.crb_th_alpha, a.retained_fraction}) {
                out += ',';
                put_double(out, v);
            }
            out += ',';
            put_int(out, a.failures);
        }
        out += "\n";
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::string body = csv_to_string(result);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace hsdest
