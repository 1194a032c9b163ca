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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "bintemp/core.hpp"
#include "bintemp/rng.hpp"

namespace bintemp {

/// Every sample drawn with the same true temperature.
struct ConstantProfile {
  double temperature = 1.0;
  bool operator==(const ConstantProfile&) const = default;
};

/// True temperature depends on the raw confidence: t_low below `cutoff`,
/// t_high at or above it.
struct PiecewiseProfile {
  double cutoff = 0.8;
  double t_low = 1.0;
  double t_high = 1.0;
  bool operator==(const PiecewiseProfile&) const = default;
};

using TemperatureProfile = std::variant<ConstantProfile, PiecewiseProfile>;

/// "const:T" or "piecewise:cutoff,t_low,t_high".
TemperatureProfile parse_profile(std::string_view text);
std::string format_profile(const TemperatureProfile& profile);

/// The temperature the generator uses for a sample with these logits.
double true_temperature(const TemperatureProfile& profile,
                        std::span<const double> z);

struct SynthConfig {
  std::size_t n_samples = 1000;
  std::size_t n_classes = 10;
  /// Standard deviation of the i.i.d. Gaussian logits.
  double logit_scale = 4.0;
  TemperatureProfile profile = ConstantProfile{};
  std::uint64_t seed = 0;

  void validate() const;
};

/// Synthetic logits whose labels are drawn from softmax(z / T_true), so the
/// true temperature is the population NLL minimizer.
///
/// Per sample, in stream order: n_classes Gaussian draws (scaled by
/// logit_scale), then one uniform draw inverted through the cumulative
/// label distribution. IDs are "s" followed by the zero-padded index
/// (at least six digits).
LogitDataset generate(const SynthConfig& config);

/// One labelled draw from the generator's distribution using `rng`.
void draw_sample(Rng& rng, const SynthConfig& config, std::span<double> z,
                 std::size_t& label);

/// Inverse-CDF categorical draw from softmax(z / t).
std::size_t sample_label(Rng& rng, std::span<const double> z, double t);

std::string synth_id(std::size_t index);

}  // namespace bintemp
