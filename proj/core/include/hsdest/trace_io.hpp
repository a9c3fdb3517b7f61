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

#include <string>

#include "hsdest/types.hpp"

namespace hsdest {

/// Measured frequency response loaded from a trace file. Format:
///   line 1: N=<int>[,Lhat=<int>]
///   N lines: <index>,<re>,<im>
/// When the header omits Lhat it defaults to N. An even N is reduced to
/// odd by dropping the trailing row (note records the truncation).
struct TraceFile {
    int N = 0;
    int L_hat = 0;
    CVec y;
    std::string note;
};

TraceFile ingest_trace(const std::string& path);

/// Inverse of ingest_trace, full double precision.
void write_trace(const std::string& path, const CVec& y, int L_hat = 0);

}  // namespace hsdest
