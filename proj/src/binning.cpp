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

#include "bintemp/binning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bintemp/error.hpp"

namespace bintemp {

std::string_view to_string(BinMethod method) noexcept {
  switch (method) {
    case BinMethod::kConfidenceInterval: return "confidence_interval";
    case BinMethod::kByCount: return "by_count";
  }
  return "unknown";
}

BinMethod parse_bin_method(std::string_view name) {
  if (name == "confidence_interval" || name == "interval") {
    return BinMethod::kConfidenceInterval;
  }
  if (name == "by_count" || name == "count") return BinMethod::kByCount;
  fail(ErrorKind::kParse, "unknown binning method '" + std::string(name) + "'");
}

void BinSpec::validate() const {
  if (edges.size() < 2) {
    fail(ErrorKind::kInvalidInput, "bin spec needs at least 2 edges");
  }
  if (edges.front() != 0.0 || edges.back() != 1.0) {
    fail(ErrorKind::kInvalidInput, "bin edges must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      fail(ErrorKind::kInvalidInput, "bin edges must be strictly increasing");
    }
  }
  if (method == BinMethod::kByCount && !high_conf_threshold) {
    fail(ErrorKind::kInvalidInput, "count-based bins need a threshold");
  }
}

BinSpec bins_confidence_interval(std::size_t n_bins) {
  if (n_bins < 1) fail(ErrorKind::kInvalidInput, "n_bins must be at least 1");
  BinSpec spec;
  spec.method = BinMethod::kConfidenceInterval;
  spec.requested_bins = n_bins;
  spec.edges.resize(n_bins + 1);
  for (std::size_t j = 0; j <= n_bins; ++j) {
    spec.edges[j] = static_cast<double>(j) / static_cast<double>(n_bins);
  }
  return spec;
}

BinSpec bins_by_count(std::span<const double> confidences, std::size_t n_bins,
                      double threshold) {
  if (n_bins < 2) {
    fail(ErrorKind::kInvalidInput,
         "count-based binning needs at least 2 bins (one is the >" +
             std::to_string(threshold) + " bin)");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    fail(ErrorKind::kInvalidInput, "threshold must lie in (0, 1)");
  }
  std::vector<double> below;
  below.reserve(confidences.size());
  for (double c : confidences) {
    if (!(c >= 0.0 && c <= 1.0)) {
      fail(ErrorKind::kInvalidInput, "confidences must lie in [0, 1]");
    }
    if (c <= threshold) below.push_back(c);
  }
  if (below.size() < n_bins) {
    fail(ErrorKind::kInsufficientSamples,
         "only " + std::to_string(below.size()) +
             " samples at or below the high-confidence threshold for " +
             std::to_string(n_bins) + " bins; reduce the number of bins");
  }
  std::sort(below.begin(), below.end());

  const std::size_t groups = n_bins - 1;
  const std::size_t base = below.size() / groups;
  const std::size_t extra = below.size() % groups;

  BinSpec spec;
  spec.method = BinMethod::kByCount;
  spec.high_conf_threshold = threshold;
  spec.requested_bins = n_bins;
  spec.edges.push_back(0.0);

  std::size_t end = 0;  // one past the last sample of the current group
  for (std::size_t g = 0; g + 1 < groups; ++g) {
    end += base + (g < extra ? 1 : 0);
    const double last = below[end - 1];
    const double next = below[end];
    if (last == next) continue;  // tie across the boundary: merge
    double edge = last + (next - last) * 0.5;
    // Adjacent doubles: the midpoint may round onto `next`.
    if (edge >= next) edge = last;
    if (edge <= spec.edges.back()) continue;
    spec.edges.push_back(edge);
  }
  if (threshold > spec.edges.back()) spec.edges.push_back(threshold);
  spec.edges.push_back(1.0);
  return spec;
}

std::size_t assign_bin(double confidence, const BinSpec& spec) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    fail(ErrorKind::kInvalidInput,
         "confidence " + std::to_string(confidence) + " outside [0, 1]");
  }
  // First edge e_k (k >= 1) with confidence <= e_k closes bin k - 1.
  auto it = std::lower_bound(spec.edges.begin() + 1, spec.edges.end(),
                             confidence);
  if (it == spec.edges.end()) --it;
  return static_cast<std::size_t>(it - spec.edges.begin()) - 1;
}

}  // namespace bintemp
