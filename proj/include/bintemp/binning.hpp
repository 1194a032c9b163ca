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
#include <string_view>
#include <vector>

namespace bintemp {

enum class BinMethod { kConfidenceInterval, kByCount };

std::string_view to_string(BinMethod method) noexcept;
BinMethod parse_bin_method(std::string_view name);

inline constexpr double kHighConfidenceThreshold = 0.999;

/// Ordered partition of [0, 1]. With edges e_0 = 0 < e_1 < ... < e_K = 1,
/// bin 0 is [0, e_1] and bin j >= 1 is (e_j, e_{j+1}].
struct BinSpec {
  std::vector<double> edges;
  BinMethod method = BinMethod::kConfidenceInterval;
  /// Only set for kByCount.
  std::optional<double> high_conf_threshold;
  /// Bin count the caller asked for. Merging ties can leave fewer bins; ABTS
  /// uses this to rebuild count-based bins on the augmented set.
  std::size_t requested_bins = 0;

  std::size_t num_bins() const noexcept {
    return edges.empty() ? 0 : edges.size() - 1;
  }
  double lower(std::size_t bin) const { return edges.at(bin); }
  double upper(std::size_t bin) const { return edges.at(bin + 1); }

  /// Throws kInvalidInput if the edges do not form a partition of [0, 1].
  void validate() const;

  bool operator==(const BinSpec&) const = default;
};

/// Equal-width bins, edges at j / n_bins.
BinSpec bins_confidence_interval(std::size_t n_bins);

/// Equal-count bins over the confidences at or below `threshold`, plus a
/// dedicated (threshold, 1] bin that takes every sample above it regardless
/// of how many there are.
///
/// The samples at or below the threshold are sorted and cut into
/// n_bins - 1 contiguous groups whose sizes differ by at most one (larger
/// groups first). Each interior edge is placed between the last confidence of
/// one group and the first of the next. If those two confidences are equal
/// the groups are merged, so identical confidences never straddle an edge and
/// the result can have fewer than n_bins bins.
///
/// Throws kInsufficientSamples when fewer than n_bins confidences lie at or
/// below the threshold.
BinSpec bins_by_count(std::span<const double> confidences, std::size_t n_bins,
                      double threshold = kHighConfidenceThreshold);

/// Index of the bin containing `confidence`. Total on [0, 1].
std::size_t assign_bin(double confidence, const BinSpec& spec);

}  // namespace bintemp
