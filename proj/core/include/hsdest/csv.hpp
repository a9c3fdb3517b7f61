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

#include "hsdest/sweep.hpp"

namespace hsdest {

/// One header row followed by one row per scenario point. Doubles in
/// %.16e scientific notation, comma separated, LF line endings.
std::string csv_to_string(const SweepResult& result);

void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace hsdest
