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

#include <cstddef>
#include <span>

#include "bintemp/core.hpp"

namespace bintemp {

struct FitConfig {
  double t_min = 0.05;
  double t_max = 20.0;
  /// Convergence width on the inverse-temperature axis.
  double tolerance = 1e-6;
  int max_iterations = 200;

  void validate() const;
  bool operator==(const FitConfig&) const = default;
};

struct FitResult {
  double temperature = 1.0;
  double final_nll = 0.0;
  int iterations = 0;
  /// The optimum sits on t_min or t_max.
  bool clamped = false;
};

/// Minimizes the mean NLL of `subset` over the temperature.
///
/// The search runs on s = 1 / t in [1 / t_max, 1 / t_min]: the NLL is convex
/// in s (log-sum-exp of a linear function minus a linear term), so golden
/// section search finds the global minimum. It is not convex in t.
FitResult fit_temperature(const LogitDataset& data,
                          std::span<const std::size_t> subset,
                          const FitConfig& config = {});

/// Whole-dataset overload.
FitResult fit_temperature(const LogitDataset& data,
                          const FitConfig& config = {});

/// Brute force: the grid temperature with the smallest NLL (ties go to the
/// smallest temperature). Test oracle for fit_temperature.
double grid_oracle(const LogitDataset& data,
                   std::span<const std::size_t> subset,
                   std::span<const double> grid);

}  // namespace bintemp
