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

#include "hsdest/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsdest {

double wrap_distance(double a, double b) {
    double d = a - b;
    d -= std::round(d);
    return std::abs(d);
}

double canonical_frequency(double f) {
    double r = f - std::floor(f);   // [0, 1)
    return r == 0.0 ? 1.0 : r;
}

CVec build_steering(double f, int N) {
    if (N < 1 || N % 2 == 0) throw std::invalid_argument("build_steering: N must be odd and >= 1");
    CVec a(N);
    const double half = (N - 1) / 2.0;
    for (int k = 0; k < N; ++k) {
        double phase = 2.0 * M_PI * (k - half) * f;
        a(k) = cxd(std::cos(phase), std::sin(phase));
    }
    return a;
}

CMat build_diffuse_basis(int N, int L) {
    if (L < 1) throw std::invalid_argument("build_diffuse_basis: L must be >= 1");
    if (N < 1 || N % 2 == 0) throw std::invalid_argument("build_diffuse_basis: N must be odd and >= 1");
    CMat D(N, L);
    for (int r = 0; r < L; ++r) {
        double f = canonical_frequency(1.0 - static_cast<double>(r) / L);
        D.col(r) = build_steering(f, N);
    }
    return D;
}

void refresh_channel_response(AhsdChannel& ch) {
    const int N = ch.dims.N;
    ch.h_s = CVec::Zero(N);
    for (int i = 0; i < ch.dims.m; ++i) ch.h_s += ch.alpha(i) * build_steering(ch.f[i], N);
    ch.h_d = build_diffuse_basis(N, ch.dims.L) * ch.gamma;
    ch.h = ch.h_s + ch.h_d;
}

SeparationReport min_separation(const std::vector<double>& f, int L) {
    SeparationReport rep;
    const int m = static_cast<int>(f.size());
    rep.delta_s = 0.5;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            rep.delta_s = std::min(rep.delta_s, wrap_distance(f[i], f[j]));
    rep.delta_sd = 0.5 / L;
    if (m > 0) {
        rep.delta_sd = 0.5;
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < L; ++r)
                rep.delta_sd = std::min(rep.delta_sd, wrap_distance(f[i], static_cast<double>(r) / L));
    }
    rep.delta = std::min(rep.delta_s, rep.delta_sd);
    return rep;
}

AhsdChannel draw_channel(Rng& rng, const ModelDims& dims, const FadingConfig& fading,
                         const std::vector<double>& f_exact, long max_rejections) {
    dims.validate();
    fading.validate();

    AhsdChannel ch;
    ch.dims = dims;

    if (!f_exact.empty()) {
        if (static_cast<int>(f_exact.size()) != dims.m)
            throw std::invalid_argument("draw_channel: f_exact size does not match dims.m");
        ch.f.reserve(dims.m);
        for (double f : f_exact) ch.f.push_back(canonical_frequency(f));
    } else {
        const double target = fading.delta_target.value_or(0.0);
        long attempts = 0;
        for (;;) {
            ch.f.clear();
            for (int i = 0; i < dims.m; ++i) ch.f.push_back(canonical_frequency(rng.uniform01()));
            if (dims.m == 0 || target <= 0.0) break;
            if (min_separation(ch.f, dims.L).delta >= target) break;
            if (++attempts >= max_rejections)
                throw std::runtime_error(
                    "draw_channel: separation target delta >= " + std::to_string(target) +
                    " not met after " + std::to_string(attempts) + " rejection attempts");
        }
    }

    // Rayleigh gains: var(alpha_i) = exp(-omega*(1-f_i)*L), var(gamma_{r+1}) = beta*exp(-omega*r).
    ch.alpha = CVec(dims.m);
    for (int i = 0; i < dims.m; ++i) {
        double var = std::exp(-fading.omega * (1.0 - ch.f[i]) * dims.L);
        ch.alpha(i) = std::sqrt(var) * rng.cnormal();
    }
    ch.gamma = CVec(dims.L);
    for (int r = 0; r < dims.L; ++r) {
        double var = fading.beta * std::exp(-fading.omega * r);
        ch.gamma(r) = std::sqrt(var) * rng.cnormal();
    }

    refresh_channel_response(ch);
    return ch;
}

MeasurementSet draw_pilots_and_observe(Rng& rng, const AhsdChannel& channel, int G, double sigma) {
    if (G < 1) throw std::invalid_argument("draw_pilots_and_observe: G must be >= 1");
    if (sigma < 0) throw std::invalid_argument("draw_pilots_and_observe: sigma must be >= 0");
    const int N = channel.dims.N;

    MeasurementSet ms;
    ms.sigma = sigma;
    ms.pilots = CMat(N, G);
    ms.observations = CMat(N, G);
    ms.y_avg = CVec::Zero(N);
    for (int g = 0; g < G; ++g) {
        for (int k = 0; k < N; ++k) ms.pilots(k, g) = rng.qpsk();
        for (int k = 0; k < N; ++k) {
            cxd noise = sigma > 0 ? sigma * rng.cnormal() : cxd(0, 0);
            ms.observations(k, g) = ms.pilots(k, g) * channel.h(k) + noise;
            // unit modulus pilots: inverse equals conjugate
            ms.y_avg(k) += std::conj(ms.pilots(k, g)) * ms.observations(k, g);
        }
    }
    ms.y_avg /= static_cast<double>(G);
    return ms;
}

double snr_db(const AhsdChannel& channel, double sigma) {
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    if (sigma < 0) throw std::invalid_argument("snr_db: sigma must be >= 0");
    double num = channel.h.squaredNorm();
    return 10.0 * std::log10(num / (channel.dims.N * sigma * sigma));
}

double sigma_for_snr(const AhsdChannel& channel, double target_snr_db) {
    double num = channel.h.squaredNorm();
    return std::sqrt(num / (channel.dims.N * std::pow(10.0, target_snr_db / 10.0)));
}

}  // namespace hsdest
