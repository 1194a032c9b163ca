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
#include <optional>
#include <span>
#include <vector>

#include "bintemp/binning.hpp"
#include "bintemp/core.hpp"

namespace bintemp {

inline constexpr std::size_t kDefaultEceBins = 15;

struct ScoredPrediction {
  double confidence = 0.0;
  bool correct = false;
};

struct ReliabilityBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::optional<double> accuracy;        // empty when count == 0
  std::optional<double> avg_confidence;  // empty when count == 0
};

struct ReliabilityReport {
  std::vector<ReliabilityBin> bins;
  std::size_t total_samples = 0;
};

/// Equal-width reliability bins over [0, 1] ([0, 1/N], then (j/N, (j+1)/N]).
ReliabilityReport reliability(std::span<const ScoredPrediction> predictions,
                              std::size_t n_bins = kDefaultEceBins);

/// Same, over an arbitrary partition.
ReliabilityReport reliability(std::span<const ScoredPrediction> predictions,
                              const BinSpec& spec);

/// Count-weighted mean |accuracy - confidence|; empty bins contribute 0.
double ece(const ReliabilityReport& report);

/// Marks each prediction correct or not against the dataset labels.
std::vector<ScoredPrediction> score(const LogitDataset& data,
                                    std::span<const Prediction> predictions);
/// Same for the t = 1 predictions.
std::vector<ScoredPrediction> score_uncalibrated(const LogitDataset& data);

/// Mean of -log softmax(z / t)[label] over the samples in `subset`.
/// Computed in log space, finite for every finite input. An empty subset is
/// an error; use the two-argument overload for the whole dataset.
double nll(const LogitDataset& data, double t,
           std::span<const std::size_t> subset);
double nll(const LogitDataset& data, double t);

/// Same objective parameterised by inverse temperature s = 1 / t, for s >= 0.
double nll_inverse(const LogitDataset& data, double inv_t,
                   std::span<const std::size_t> subset);
double nll_inverse(const LogitDataset& data, double inv_t);

/// Fraction of predictions that are correct.
double accuracy(std::span<const ScoredPrediction> predictions);

}  // namespace bintemp
