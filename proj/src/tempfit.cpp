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

#include "bintemp/tempfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bintemp/error.hpp"
#include "bintemp/metrics.hpp"

namespace bintemp {

void FitConfig::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    fail(ErrorKind::kInvalidInput, "fit bounds must satisfy 0 < t_min < t_max");
  }
  if (!(tolerance > 0.0)) {
    fail(ErrorKind::kInvalidInput, "fit tolerance must be positive");
  }
  if (max_iterations < 1) {
    fail(ErrorKind::kInvalidInput, "max_iterations must be at least 1");
  }
}

FitResult fit_temperature(const LogitDataset& data,
                          std::span<const std::size_t> subset,
                          const FitConfig& config) {
  config.validate();
  if (subset.empty()) {
    fail(ErrorKind::kEmptyInput, "cannot fit a temperature on zero samples");
  }
  auto objective = [&](double s) { return nll_inverse(data, s, subset); };

  const double s_lo = 1.0 / config.t_max;
  const double s_hi = 1.0 / config.t_min;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = s_lo;
  double b = s_hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);

  FitResult result;
  while (b - a > config.tolerance && result.iterations < config.max_iterations) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
    ++result.iterations;
  }

  const double s = 0.5 * (a + b);
  if (s - s_lo <= config.tolerance) {
    result.temperature = config.t_max;
    result.clamped = true;
  } else if (s_hi - s <= config.tolerance) {
    result.temperature = config.t_min;
    result.clamped = true;
  } else {
    result.temperature = std::clamp(1.0 / s, config.t_min, config.t_max);
  }
  result.final_nll = nll(data, result.temperature, subset);
  return result;
}

FitResult fit_temperature(const LogitDataset& data, const FitConfig& config) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return fit_temperature(data, all, config);
}

double grid_oracle(const LogitDataset& data,
                   std::span<const std::size_t> subset,
                   std::span<const double> grid) {
  if (grid.empty()) fail(ErrorKind::kEmptyInput, "empty temperature grid");
  if (subset.empty()) fail(ErrorKind::kEmptyInput, "empty subset");
  double best_t = 0.0;
  double best_nll = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    check_temperature(t);
    const double value = nll(data, t, subset);
    if (value < best_nll || (value == best_nll && t < best_t)) {
      best_nll = value;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace bintemp
