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

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace hsdest {

/// Deterministic counter-based generator (splitmix64 stream).
///
/// All randomness in the library flows through this type so that a fixed
/// seed reproduces bit-identical results regardless of platform, compiler
/// or worker count. Streams for independent tasks are derived from a root
/// seed and an index path, never from shared mutable state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent stream from (seed, path...) by hash chaining.
    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix(seed ^ 0x9E3779B97F4A7C15ULL);
        for (std::uint64_t p : path) s = mix(s ^ mix(p + 0xD1B54A32D192ED03ULL));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Circularly symmetric complex normal CN(0, 1), E|z|^2 = 1.
    std::complex<double> cnormal() {
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-std::log1p(-u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

    /// Unit-modulus QPSK symbol, uniform over the four constellation points.
    std::complex<double> qpsk() {
        static const double inv_sqrt2 = 0.7071067811865475244;
        switch (next_u64() & 3u) {
            case 0: return {inv_sqrt2, inv_sqrt2};
            case 1: return {-inv_sqrt2, inv_sqrt2};
            case 2: return {-inv_sqrt2, -inv_sqrt2};
            default: return {inv_sqrt2, -inv_sqrt2};
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace hsdest
