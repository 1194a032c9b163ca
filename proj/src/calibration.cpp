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

#include "bintemp/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "bintemp/error.hpp"
#include "bintemp/metrics.hpp"

namespace bintemp {

std::string_view to_string(MapMethod method) noexcept {
  switch (method) {
    case MapMethod::kTs: return "ts";
    case MapMethod::kBts: return "bts";
    case MapMethod::kAbts: return "abts";
  }
  return "unknown";
}

MapMethod parse_map_method(std::string_view name) {
  if (name == "ts") return MapMethod::kTs;
  if (name == "bts") return MapMethod::kBts;
  if (name == "abts") return MapMethod::kAbts;
  fail(ErrorKind::kParse, "unknown calibration method '" + std::string(name) +
                              "' (expected ts, bts or abts)");
}

void CalibrationMap::validate() const {
  spec.validate();
  const std::size_t k = spec.num_bins();
  if (temperatures.size() != k || per_bin_counts.size() != k) {
    fail(ErrorKind::kInvalidInput,
         "calibration map has " + std::to_string(k) + " bins but " +
             std::to_string(temperatures.size()) + " temperatures and " +
             std::to_string(per_bin_counts.size()) + " counts");
  }
  config.fit.validate();
  for (std::size_t j = 0; j < k; ++j) {
    const double t = temperatures[j];
    if (!(t >= config.fit.t_min && t <= config.fit.t_max)) {
      fail(ErrorKind::kInvalidInput,
           "bin " + std::to_string(j) + " temperature outside [t_min, t_max]");
    }
  }
  check_temperature(fallback_temperature);
  if (method == MapMethod::kTs && k != 1) {
    fail(ErrorKind::kInvalidInput, "a ts map must have exactly one bin");
  }
}

CalibrationMap fit_ts(const LogitDataset& validation, const FitConfig& config) {
  if (validation.empty()) {
    fail(ErrorKind::kEmptyInput, "temperature scaling needs validation samples");
  }
  const FitResult global = fit_temperature(validation, config);
  CalibrationMap map;
  map.spec = bins_confidence_interval(1);
  map.temperatures = {global.temperature};
  map.fallback_temperature = global.temperature;
  map.per_bin_counts = {validation.size()};
  map.method = MapMethod::kTs;
  map.config.fit = config;
  map.config.min_bin_samples = 1;
  map.num_classes = validation.num_classes();
  return map;
}

CalibrationMap fit_bts(const LogitDataset& validation, const BinSpec& spec,
                       const BtsConfig& config) {
  if (validation.empty()) {
    fail(ErrorKind::kEmptyInput, "bin-wise scaling needs validation samples");
  }
  spec.validate();
  config.fit.validate();

  const std::size_t k = spec.num_bins();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < validation.size(); ++i) {
    members[assign_bin(max_probability(validation.logits(i)), spec)]
        .push_back(i);
  }

  CalibrationMap map;
  map.spec = spec;
  map.method = MapMethod::kBts;
  map.config = config;
  map.num_classes = validation.num_classes();
  map.fallback_temperature = fit_temperature(validation, config.fit).temperature;
  map.temperatures.resize(k);
  map.per_bin_counts.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    map.per_bin_counts[j] = members[j].size();
    const bool sparse =
        members[j].empty() || members[j].size() < config.min_bin_samples;
    map.temperatures[j] =
        sparse ? map.fallback_temperature
               : fit_temperature(validation, members[j], config.fit).temperature;
  }
  return map;
}

AugmentationSelection select_for_augmentation(const LogitDataset& validation,
                                              double cutoff) {
  if (!(cutoff > 0.0 && cutoff <= 1.0)) {
    fail(ErrorKind::kInvalidInput, "augmentation cutoff must lie in (0, 1]");
  }
  if (!validation.empty() && !validation.has_ids()) {
    fail(ErrorKind::kInvalidInput,
         "augmentation selection needs sample ids to join augmented logits");
  }
  AugmentationSelection selection;
  selection.cutoff = cutoff;
  for (std::size_t i = 0; i < validation.size(); ++i) {
    if (max_probability(validation.logits(i)) < cutoff) {
      selection.selected_ids.push_back(validation.id(i));
    }
  }
  return selection;
}

std::string augmentation_source_id(std::string_view augmented_id) {
  const auto pos = augmented_id.rfind(kAugmentSuffix);
  const auto digits = pos == std::string_view::npos
                          ? std::string_view{}
                          : augmented_id.substr(pos + kAugmentSuffix.size());
  const bool ok = pos != std::string_view::npos && pos > 0 && !digits.empty() &&
                  std::all_of(digits.begin(), digits.end(), [](char ch) {
                    return std::isdigit(static_cast<unsigned char>(ch)) != 0;
                  });
  if (!ok) {
    fail(ErrorKind::kConsistency,
         "augmented sample id '" + std::string(augmented_id) +
             "' does not have the form <source_id>__aug<k>");
  }
  return std::string(augmented_id.substr(0, pos));
}

CalibrationMap fit_abts(const LogitDataset& validation,
                        const LogitDataset& augmented,
                        const AugmentationSelection& selection,
                        const BinSpec& spec, const BtsConfig& config) {
  if (!augmented.empty()) {
    if (!validation.has_ids() || !augmented.has_ids()) {
      fail(ErrorKind::kConsistency,
           "augmented fitting needs sample ids on both datasets");
    }
    if (augmented.num_classes() != validation.num_classes()) {
      fail(ErrorKind::kConsistency,
           "augmented logits have " + std::to_string(augmented.num_classes()) +
               " classes, validation has " +
               std::to_string(validation.num_classes()));
    }
  }
  const std::unordered_set<std::string> selected(selection.selected_ids.begin(),
                                                 selection.selected_ids.end());
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    const std::string& id = augmented.id(i);
    const std::string source = augmentation_source_id(id);
    const auto source_index = validation.find(source);
    if (!source_index) {
      fail(ErrorKind::kConsistency, "augmented sample '" + id +
                                        "' references unknown sample '" +
                                        source + "'");
    }
    if (!selected.contains(source)) {
      fail(ErrorKind::kConsistency, "augmented sample '" + id +
                                        "' references unselected sample '" +
                                        source + "'");
    }
    if (augmented.label(i) != validation.label(*source_index)) {
      fail(ErrorKind::kConsistency,
           "augmented sample '" + id + "' has label " +
               std::to_string(augmented.label(i)) + " but its source has " +
               std::to_string(validation.label(*source_index)));
    }
  }

  const LogitDataset joined =
      augmented.empty() ? validation : validation.concat(augmented);
  BinSpec fit_spec = spec;
  if (spec.method == BinMethod::kByCount) {
    fit_spec = bins_by_count(raw_confidences(joined), spec.requested_bins,
                             spec.high_conf_threshold.value_or(
                                 kHighConfidenceThreshold));
  }
  CalibrationMap map = fit_bts(joined, fit_spec, config);
  map.method = MapMethod::kAbts;
  return map;
}

MappedPrediction map_sample(std::span<const double> z,
                            const CalibrationMap& map) {
  check_logits(z);
  MappedPrediction out;
  out.predicted_class = argmax(z);
  out.raw_confidence = max_probability(z);
  out.bin = assign_bin(out.raw_confidence, map.spec);
  out.temperature = map.temperatures.at(out.bin);
  out.confidence = max_probability(z, out.temperature);
  return out;
}

std::vector<MappedPrediction> apply_map_detailed(const LogitDataset& data,
                                                 const CalibrationMap& map) {
  map.validate();
  std::vector<MappedPrediction> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(map_sample(data.logits(i), map));
  }
  return out;
}

std::vector<Prediction> apply_map(const LogitDataset& data,
                                  const CalibrationMap& map) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const auto& p : apply_map_detailed(data, map)) {
    out.push_back({p.predicted_class, p.confidence});
  }
  return out;
}

double calibrated_nll(const LogitDataset& data, const CalibrationMap& map) {
  if (data.empty()) fail(ErrorKind::kEmptyInput, "NLL of an empty dataset");
  map.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto z = data.logits(i);
    const double t =
        map.temperatures[assign_bin(max_probability(z), map.spec)];
    total += neg_log_prob(z, data.label(i), 1.0 / t);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace bintemp
