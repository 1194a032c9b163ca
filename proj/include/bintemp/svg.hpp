// Copyright 2026 The bintemp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "bintemp/metrics.hpp"

namespace bintemp {

/// Reliability diagram: one accuracy bar (class "acc-bar") per non-empty bin
/// against the identity diagonal, a sample-count histogram (class
/// "hist-bar") underneath, and the ECE in the title.
std::string render_reliability_svg(const ReliabilityReport& report,
                                   const std::string& title = "");

}  // namespace bintemp
