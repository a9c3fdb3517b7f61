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

#include <vector>

#include "hsdest/rng.hpp"
#include "hsdest/types.hpp"

namespace hsdest {

/// Ground-truth hybrid channel: sparse spikes at arbitrary normalized
/// frequencies plus diffuse taps on the uniform grid r/L.
struct AhsdChannel {
    ModelDims dims;
    std::vector<double> f;  ///< sparse frequencies in (0, 1], size m
    CVec alpha;             ///< sparse complex gains, size m
    CVec gamma;             ///< diffuse complex gains, size L
    CVec h_s, h_d, h;       ///< derived length-N responses, h = h_s + h_d
};

/// One batch of pilot snapshots and the averaged filtered measurement.
struct MeasurementSet {
    CMat pilots;        ///< N x G unit-modulus pilot diagonals
    CMat observations;  ///< N x G raw snapshots y^(g)
    CVec y_avg;         ///< averaged filtered measurement
    double sigma = 0.0; ///< noise std deviation per complex sample
};

/// Wrap-around separations of the sparse support.
struct SeparationReport {
    double delta_s = 0.0;   ///< min pairwise spacing among sparse frequencies
    double delta_sd = 0.0;  ///< min distance from a sparse frequency to the grid r/L
    double delta = 0.0;     ///< min of the two
};

/// Wrap-around (toroidal) distance between two frequencies, in [0, 1/2].
double wrap_distance(double a, double b);

/// Map a frequency to its canonical representative in (0, 1].
double canonical_frequency(double f);

/// Steering vector: entry k is exp(j*2*pi*(k - (N-1)/2)*f), k = 0..N-1.
/// Throws if N is even or nonpositive. Any real f is accepted (period 1).
CVec build_steering(double f, int N);

/// N x L basis whose column r is the steering vector at the grid
/// frequency 1 - r/L (column 0 is all ones). Throws on invalid dims.
CMat build_diffuse_basis(int N, int L);

/// Recompute h_s, h_d, h from (f, alpha, gamma).
void refresh_channel_response(AhsdChannel& ch);

/// Draw a channel from the fading law. If f_exact is nonempty those
/// frequencies are used verbatim; otherwise frequencies are sampled
/// uniformly and re-drawn until the separation target (if any) is met.
/// Throws after max_rejections failed attempts.
AhsdChannel draw_channel(Rng& rng, const ModelDims& dims, const FadingConfig& fading,
                         const std::vector<double>& f_exact = {},
                         long max_rejections = 100000);

/// QPSK pilots and noisy snapshots; y_avg is the pilot-compensated mean.
MeasurementSet draw_pilots_and_observe(Rng& rng, const AhsdChannel& channel, int G, double sigma);

/// SNR in dB: 10*log10(||h||^2 / (N*sigma^2)). Returns +inf for sigma = 0.
double snr_db(const AhsdChannel& channel, double sigma);

/// Noise level that realizes a target SNR for the given channel.
double sigma_for_snr(const AhsdChannel& channel, double target_snr_db);

/// Minimum wrap-around separations; delta_s = 1/2 when fewer than two
/// frequencies are present, delta_sd = 1/(2L) when none are.
SeparationReport min_separation(const std::vector<double>& f, int L);

}  // namespace hsdest
