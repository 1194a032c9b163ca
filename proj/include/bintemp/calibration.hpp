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
#include <string>
#include <string_view>
#include <vector>

#include "bintemp/binning.hpp"
#include "bintemp/core.hpp"
#include "bintemp/tempfit.hpp"

namespace bintemp {

enum class MapMethod { kTs, kBts, kAbts };

std::string_view to_string(MapMethod method) noexcept;
MapMethod parse_map_method(std::string_view name);

inline constexpr std::size_t kDefaultMinBinSamples = 10;
inline constexpr double kDefaultAugmentCutoff = 0.8;

/// Separator between a source sample ID and its augmentation index, as in
/// "s000123__aug1".
inline constexpr std::string_view kAugmentSuffix = "__aug";

struct BtsConfig {
  FitConfig fit;
  /// Bins with fewer validation samples use the fallback temperature.
  std::size_t min_bin_samples = kDefaultMinBinSamples;

  bool operator==(const BtsConfig&) const = default;
};

/// A fitted calibrator: one temperature per bin of `spec`, chosen by the
/// uncalibrated confidence of a sample.
struct CalibrationMap {
  BinSpec spec;
  std::vector<double> temperatures;
  /// Global temperature-scaling fit over the whole fitting set.
  double fallback_temperature = 1.0;
  /// Fitting samples that landed in each bin. Bins with fewer than
  /// config.min_bin_samples carry the fallback temperature.
  std::vector<std::size_t> per_bin_counts;
  MapMethod method = MapMethod::kTs;
  BtsConfig config;
  /// Class count of the fitting data; 0 when unknown.
  std::size_t num_classes = 0;

  bool uses_fallback(std::size_t bin) const {
    const std::size_t count = per_bin_counts.at(bin);
    return count == 0 || count < config.min_bin_samples;
  }

  /// Throws kInvalidInput when the spec is invalid, temperatures and bins
  /// disagree in length, or a temperature is outside the configured range.
  void validate() const;

  bool operator==(const CalibrationMap&) const = default;
};

/// Single-bin map over [0, 1]; temperature and fallback are both the global
/// temperature-scaling fit.
CalibrationMap fit_ts(const LogitDataset& validation,
                      const FitConfig& config = {});

/// Bin-wise fit. Every validation sample is assigned by its t = 1 confidence
/// and each bin is fitted independently on its own samples.
CalibrationMap fit_bts(const LogitDataset& validation, const BinSpec& spec,
                       const BtsConfig& config = {});

struct AugmentationSelection {
  double cutoff = kDefaultAugmentCutoff;
  std::vector<std::string> selected_ids;
};

/// Samples whose t = 1 confidence is strictly below `cutoff`, in dataset
/// order. Requires sample IDs.
AugmentationSelection select_for_augmentation(const LogitDataset& validation,
                                              double cutoff =
                                                  kDefaultAugmentCutoff);

/// Source ID of an augmented record ("abc__aug3" -> "abc"). Throws
/// kConsistency if the suffix is missing or malformed.
std::string augmentation_source_id(std::string_view augmented_id);

/// BTS on validation plus augmented logits.
///
/// Every augmented record must name a selected source sample through its ID
/// and carry that sample's label. Augmented samples are binned by their own
/// confidence. Count-based specs are rebuilt on the union with the originally
/// requested bin count.
CalibrationMap fit_abts(const LogitDataset& validation,
                        const LogitDataset& augmented,
                        const AugmentationSelection& selection,
                        const BinSpec& spec, const BtsConfig& config = {});

struct MappedPrediction {
  std::size_t predicted_class = 0;
  double raw_confidence = 0.0;
  double confidence = 0.0;
  std::size_t bin = 0;
  double temperature = 1.0;
};

MappedPrediction map_sample(std::span<const double> z,
                            const CalibrationMap& map);

std::vector<Prediction> apply_map(const LogitDataset& data,
                                  const CalibrationMap& map);

std::vector<MappedPrediction> apply_map_detailed(const LogitDataset& data,
                                                 const CalibrationMap& map);

/// Mean NLL with each sample scaled by its bin's temperature.
double calibrated_nll(const LogitDataset& data, const CalibrationMap& map);

}  // namespace bintemp
