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
#include <string>
#include <unordered_map>
#include <vector>

namespace bintemp {

/// Logits plus integer labels for a set of samples, stored row-major.
///
/// Invariants (checked on every insertion): at least two classes, all logits
/// finite, labels in [0, num_classes), sample IDs either present on every
/// record or on none, and unique when present.
class LogitDataset {
 public:
  explicit LogitDataset(std::size_t num_classes);

  /// Bulk constructor. `logits` is row-major with `labels.size()` rows.
  /// `ids` is either empty or has one entry per row.
  LogitDataset(std::size_t num_classes, std::vector<double> logits,
               std::vector<std::size_t> labels,
               std::vector<std::string> ids = {});

  void add(std::span<const double> logits, std::size_t label,
           std::optional<std::string> id = std::nullopt);

  void reserve(std::size_t n);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  bool has_ids() const noexcept { return !ids_.empty(); }

  std::span<const double> logits(std::size_t i) const {
    return {logits_.data() + i * num_classes_, num_classes_};
  }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }

  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& flat_logits() const noexcept { return logits_; }

  /// Index of the record with this ID, if any.
  std::optional<std::size_t> find(const std::string& id) const;

  /// Records of `this` followed by those of `other`.
  LogitDataset concat(const LogitDataset& other) const;

 private:
  void check_row(std::span<const double> logits, std::size_t label) const;

  std::size_t num_classes_;
  std::vector<double> logits_;
  std::vector<std::size_t> labels_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> id_index_;
};

struct Prediction {
  std::size_t predicted_class = 0;
  double confidence = 0.0;
};

/// Throws kInvalidInput unless z has at least two entries, all finite.
void check_logits(std::span<const double> z);

/// Throws kInvalidTemperature unless t is finite and positive.
void check_temperature(double t);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> z);

std::vector<double> softmax(std::span<const double> z);

/// softmax(z / t).
std::vector<double> scaled_softmax(std::span<const double> z, double t);

/// log(sum_c exp(z_c * inv_t)), computed with max subtraction.
double log_sum_exp(std::span<const double> z, double inv_t = 1.0);

/// -log softmax(z * inv_t)[label]. Stays accurate when that probability is
/// within rounding of 1.
double neg_log_prob(std::span<const double> z, std::size_t label,
                    double inv_t = 1.0);

/// Max entry of softmax(z / t), i.e. 1 / sum_c exp((z_c - z_max) / t).
double max_probability(std::span<const double> z, double t = 1.0);

Prediction predict(std::span<const double> z, double t = 1.0);

/// Uncalibrated (t = 1) confidence of every sample.
std::vector<double> raw_confidences(const LogitDataset& data);

}  // namespace bintemp
