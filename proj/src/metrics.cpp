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

#include "bintemp/metrics.hpp"

#include <cmath>

#include "bintemp/error.hpp"

namespace bintemp {

ReliabilityReport reliability(std::span<const ScoredPrediction> predictions,
                              std::size_t n_bins) {
  if (n_bins < 1) fail(ErrorKind::kInvalidInput, "n_bins must be at least 1");
  return reliability(predictions, bins_confidence_interval(n_bins));
}

ReliabilityReport reliability(std::span<const ScoredPrediction> predictions,
                              const BinSpec& spec) {
  if (predictions.empty()) {
    fail(ErrorKind::kEmptyInput, "reliability needs at least one prediction");
  }
  spec.validate();
  const std::size_t k = spec.num_bins();
  std::vector<std::size_t> counts(k, 0);
  std::vector<std::size_t> correct(k, 0);
  std::vector<double> conf_sum(k, 0.0);
  for (const auto& p : predictions) {
    const std::size_t j = assign_bin(p.confidence, spec);
    ++counts[j];
    correct[j] += p.correct ? 1 : 0;
    conf_sum[j] += p.confidence;
  }

  ReliabilityReport report;
  report.total_samples = predictions.size();
  report.bins.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto& bin = report.bins[j];
    bin.lower = spec.lower(j);
    bin.upper = spec.upper(j);
    bin.count = counts[j];
    if (counts[j] > 0) {
      const double n = static_cast<double>(counts[j]);
      bin.accuracy = static_cast<double>(correct[j]) / n;
      bin.avg_confidence = conf_sum[j] / n;
    }
  }
  return report;
}

double ece(const ReliabilityReport& report) {
  if (report.total_samples == 0) {
    fail(ErrorKind::kEmptyInput, "ECE of an empty report");
  }
  double total = 0.0;
  for (const auto& bin : report.bins) {
    if (bin.count == 0) continue;
    total += static_cast<double>(bin.count) *
             std::abs(*bin.accuracy - *bin.avg_confidence);
  }
  return total / static_cast<double>(report.total_samples);
}

std::vector<ScoredPrediction> score(const LogitDataset& data,
                                    std::span<const Prediction> predictions) {
  if (predictions.size() != data.size()) {
    fail(ErrorKind::kInvalidInput, "one prediction per sample expected");
  }
  std::vector<ScoredPrediction> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = {predictions[i].confidence,
              predictions[i].predicted_class == data.label(i)};
  }
  return out;
}

std::vector<ScoredPrediction> score_uncalibrated(const LogitDataset& data) {
  std::vector<ScoredPrediction> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto z = data.logits(i);
    out[i] = {max_probability(z), argmax(z) == data.label(i)};
  }
  return out;
}

namespace {

double sample_nll(const LogitDataset& data, std::size_t i, double inv_t) {
  return neg_log_prob(data.logits(i), data.label(i), inv_t);
}

void check_inverse(double inv_t) {
  if (!(inv_t >= 0.0) || !std::isfinite(inv_t)) {
    fail(ErrorKind::kInvalidTemperature, "inverse temperature must be >= 0");
  }
}

}  // namespace

double nll_inverse(const LogitDataset& data, double inv_t,
                   std::span<const std::size_t> subset) {
  check_inverse(inv_t);
  if (subset.empty()) fail(ErrorKind::kEmptyInput, "NLL of an empty subset");
  double total = 0.0;
  for (std::size_t i : subset) {
    if (i >= data.size()) {
      fail(ErrorKind::kInvalidInput, "subset index out of range");
    }
    total += sample_nll(data, i, inv_t);
  }
  return total / static_cast<double>(subset.size());
}

double nll_inverse(const LogitDataset& data, double inv_t) {
  check_inverse(inv_t);
  if (data.empty()) fail(ErrorKind::kEmptyInput, "NLL of an empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += sample_nll(data, i, inv_t);
  }
  return total / static_cast<double>(data.size());
}

double nll(const LogitDataset& data, double t,
           std::span<const std::size_t> subset) {
  check_temperature(t);
  return nll_inverse(data, 1.0 / t, subset);
}

double nll(const LogitDataset& data, double t) {
  check_temperature(t);
  return nll_inverse(data, 1.0 / t);
}

double accuracy(std::span<const ScoredPrediction> predictions) {
  if (predictions.empty()) fail(ErrorKind::kEmptyInput, "accuracy of nothing");
  std::size_t hits = 0;
  for (const auto& p : predictions) hits += p.correct ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace bintemp
