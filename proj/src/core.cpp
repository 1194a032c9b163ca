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

#include "bintemp/core.hpp"

#include <algorithm>
#include <cmath>

#include "bintemp/error.hpp"

namespace bintemp {

LogitDataset::LogitDataset(std::size_t num_classes) : num_classes_(num_classes) {
  if (num_classes < 2) {
    fail(ErrorKind::kInvalidInput, "a dataset needs at least 2 classes");
  }
}

LogitDataset::LogitDataset(std::size_t num_classes, std::vector<double> logits,
                           std::vector<std::size_t> labels,
                           std::vector<std::string> ids)
    : LogitDataset(num_classes) {
  if (logits.size() != labels.size() * num_classes) {
    fail(ErrorKind::kInvalidInput,
         "logit count " + std::to_string(logits.size()) + " does not match " +
             std::to_string(labels.size()) + " rows of " +
             std::to_string(num_classes) + " classes");
  }
  if (!ids.empty() && ids.size() != labels.size()) {
    fail(ErrorKind::kInvalidInput, "ids must be empty or one per row");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    check_row({logits.data() + i * num_classes, num_classes}, labels[i]);
  }
  logits_ = std::move(logits);
  labels_ = std::move(labels);
  if (!ids.empty()) {
    id_index_.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!id_index_.emplace(ids[i], i).second) {
        fail(ErrorKind::kInvalidInput, "duplicate sample id '" + ids[i] + "'");
      }
    }
    ids_ = std::move(ids);
  }
}

void LogitDataset::check_row(std::span<const double> logits,
                             std::size_t label) const {
  if (logits.size() != num_classes_) {
    fail(ErrorKind::kInvalidInput,
         "expected " + std::to_string(num_classes_) + " logits, got " +
             std::to_string(logits.size()));
  }
  check_logits(logits);
  if (label >= num_classes_) {
    fail(ErrorKind::kInvalidInput,
         "label " + std::to_string(label) + " out of range for " +
             std::to_string(num_classes_) + " classes");
  }
}

void LogitDataset::add(std::span<const double> logits, std::size_t label,
                       std::optional<std::string> id) {
  check_row(logits, label);
  if (!empty() && id.has_value() != has_ids()) {
    fail(ErrorKind::kInvalidInput,
         "sample ids must be given for every record or for none");
  }
  if (id) {
    if (!id_index_.emplace(*id, size()).second) {
      fail(ErrorKind::kInvalidInput, "duplicate sample id '" + *id + "'");
    }
    ids_.push_back(std::move(*id));
  }
  logits_.insert(logits_.end(), logits.begin(), logits.end());
  labels_.push_back(label);
}

void LogitDataset::reserve(std::size_t n) {
  logits_.reserve(n * num_classes_);
  labels_.reserve(n);
}

std::optional<std::size_t> LogitDataset::find(const std::string& id) const {
  auto it = id_index_.find(id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

LogitDataset LogitDataset::concat(const LogitDataset& other) const {
  if (other.num_classes_ != num_classes_) {
    fail(ErrorKind::kConsistency, "cannot concatenate datasets with " +
                                      std::to_string(num_classes_) + " and " +
                                      std::to_string(other.num_classes_) +
                                      " classes");
  }
  if (!empty() && !other.empty() && has_ids() != other.has_ids()) {
    fail(ErrorKind::kConsistency,
         "cannot concatenate datasets with and without sample ids");
  }
  std::vector<double> logits = logits_;
  logits.insert(logits.end(), other.logits_.begin(), other.logits_.end());
  std::vector<std::size_t> labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  std::vector<std::string> ids = ids_;
  ids.insert(ids.end(), other.ids_.begin(), other.ids_.end());
  return LogitDataset(num_classes_, std::move(logits), std::move(labels),
                      std::move(ids));
}

void check_logits(std::span<const double> z) {
  if (z.size() < 2) {
    fail(ErrorKind::kInvalidInput, "logit vectors need at least 2 entries");
  }
  for (double v : z) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::kInvalidInput, "logits must be finite");
    }
  }
}

void check_temperature(double t) {
  if (!std::isfinite(t) || t <= 0.0) {
    fail(ErrorKind::kInvalidTemperature,
         "temperature must be finite and positive");
  }
}

std::size_t argmax(std::span<const double> z) {
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) -
                                  z.begin());
}

std::vector<double> softmax(std::span<const double> z) {
  return scaled_softmax(z, 1.0);
}

std::vector<double> scaled_softmax(std::span<const double> z, double t) {
  check_logits(z);
  check_temperature(t);
  const double z_max = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    p[c] = std::exp((z[c] - z_max) / t);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

namespace {

// log(sum_c exp((z_c - z_max) * inv_t)) with the leading 1 split off, so the
// result keeps full precision when every other term is tiny.
double log_tail(std::span<const double> z, double inv_t, std::size_t top) {
  const double z_max = z[top];
  double tail = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    if (c != top) tail += std::exp((z[c] - z_max) * inv_t);
  }
  return std::log1p(tail);
}

}  // namespace

double log_sum_exp(std::span<const double> z, double inv_t) {
  const std::size_t top = argmax(z);
  return z[top] * inv_t + log_tail(z, inv_t, top);
}

double neg_log_prob(std::span<const double> z, std::size_t label,
                    double inv_t) {
  const std::size_t top = argmax(z);
  return (z[top] - z[label]) * inv_t + log_tail(z, inv_t, top);
}

double max_probability(std::span<const double> z, double t) {
  const double z_max = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp((v - z_max) / t);
  return 1.0 / sum;
}

Prediction predict(std::span<const double> z, double t) {
  check_logits(z);
  check_temperature(t);
  return {argmax(z), max_probability(z, t)};
}

std::vector<double> raw_confidences(const LogitDataset& data) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = max_probability(data.logits(i));
  }
  return out;
}

}  // namespace bintemp
