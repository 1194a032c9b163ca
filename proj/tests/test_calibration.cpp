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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bintemp/calibration.hpp"
#include "bintemp/error.hpp"
#include "bintemp/metrics.hpp"
#include "bintemp/rng.hpp"
#include "bintemp/synth.hpp"

using namespace bintemp;

namespace {

LogitDataset synthetic(TemperatureProfile profile, std::size_t n,
                       std::uint64_t seed) {
  SynthConfig config;
  config.n_samples = n;
  config.profile = profile;
  config.seed = seed;
  return generate(config);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected bintemp::Error");
  return ErrorKind::kIo;
}

/// Copies of the given validation rows, relabelled as `<id>__aug1`.
LogitDataset duplicates(const LogitDataset& validation,
                        const std::vector<std::string>& ids) {
  LogitDataset out(validation.num_classes());
  for (const auto& id : ids) {
    const std::size_t i = *validation.find(id);
    out.add(validation.logits(i), validation.label(i), id + "__aug1");
  }
  return out;
}

}  // namespace

TEST_CASE("fit_ts recovers the generating temperature") {
  const LogitDataset data = synthetic(ConstantProfile{2.5}, 50000, 1);
  const CalibrationMap map = fit_ts(data);
  CHECK(map.method == MapMethod::kTs);
  CHECK(map.spec.num_bins() == 1);
  CHECK(map.temperatures.size() == 1);
  CHECK(std::abs(map.temperatures[0] - 2.5) <= 0.05);
  CHECK(map.fallback_temperature == map.temperatures[0]);
  CHECK(map.per_bin_counts == std::vector<std::size_t>{50000});
}

TEST_CASE("fit_ts on one confident correct sample sharpens to t_min") {
  const LogitDataset data(2, {4.0, 0.0}, {0});
  CHECK(fit_ts(data).temperatures[0] == 0.05);
  CHECK_THROWS_AS(fit_ts(LogitDataset(2)), Error);
}

TEST_CASE("single-bin BTS equals TS") {
  const LogitDataset data = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 5000, 4);
  const CalibrationMap ts = fit_ts(data);
  const CalibrationMap bts = fit_bts(data, bins_confidence_interval(1));
  CHECK(std::abs(bts.temperatures[0] - ts.temperatures[0]) <= 1e-9);
  CHECK(bts.fallback_temperature == ts.fallback_temperature);
}

TEST_CASE("BTS recovers both regimes of the piecewise profile") {
  const PiecewiseProfile profile{0.8, 1.2, 3.0};
  const LogitDataset data = synthetic(profile, 100000, 3);
  const BinSpec spec = bins_by_count(raw_confidences(data), 10);
  const CalibrationMap map = fit_bts(data, spec);
  REQUIRE(map.spec.num_bins() == 10);
  for (std::size_t j = 0; j < map.spec.num_bins(); ++j) {
    if (map.uses_fallback(j)) continue;
    // Bins straddling the cutoff mix both regimes.
    if (map.spec.lower(j) < 0.8 && map.spec.upper(j) > 0.8) continue;
    const double truth = map.spec.upper(j) <= 0.8 ? 1.2 : 3.0;
    CHECK(std::abs(map.temperatures[j] - truth) <= 0.15);
  }
}

TEST_CASE("empty and sparse bins fall back to global TS") {
  const LogitDataset data = synthetic(ConstantProfile{2.0}, 3000, 6);
  BinSpec spec = bins_confidence_interval(20);
  const CalibrationMap map = fit_bts(data, spec);
  const double global = fit_ts(data).temperatures[0];
  bool saw_empty = false;
  for (std::size_t j = 0; j < map.spec.num_bins(); ++j) {
    if (map.per_bin_counts[j] < kDefaultMinBinSamples) {
      CHECK(map.temperatures[j] == global);
      CHECK(map.uses_fallback(j));
    }
    if (map.per_bin_counts[j] == 0) saw_empty = true;
  }
  // With C = 10 no confidence can fall below 0.1, so the first bin is empty.
  CHECK(saw_empty);
}

TEST_CASE("per-bin fits are independent of other bins") {
  const LogitDataset data = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 8000, 9);
  const BinSpec spec = bins_confidence_interval(10);
  const CalibrationMap map = fit_bts(data, spec);

  // Keep one bin's members and replace everything else by fresh samples.
  const std::size_t target = 6;
  const LogitDataset other = synthetic(ConstantProfile{0.7}, 4000, 10);
  LogitDataset mixed(data.num_classes());
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (assign_bin(max_probability(data.logits(i)), spec) == target) {
      mixed.add(data.logits(i), data.label(i));
    }
  }
  for (std::size_t i = 0; i < other.size(); ++i) {
    if (assign_bin(max_probability(other.logits(i)), spec) != target) {
      mixed.add(other.logits(i), other.label(i));
    }
  }
  REQUIRE(map.per_bin_counts[target] >= kDefaultMinBinSamples);
  const CalibrationMap remap = fit_bts(mixed, spec);
  CHECK(remap.temperatures[target] == map.temperatures[target]);
}

TEST_CASE("select_for_augmentation examples") {
  // Confidence c from [log(3c / (1 - c)), 0, 0, 0]. The boundary row puts
  // all mass on two classes, [log 4, 0, ...], so it computes to exactly 0.8.
  auto logits_for = [](double c) {
    return std::vector<double>{std::log(3.0 * c / (1.0 - c)), 0.0, 0.0, 0.0};
  };
  LogitDataset data(4);
  data.add(logits_for(0.3), 0, "s0");
  data.add(logits_for(0.79), 0, "s1");
  data.add(std::vector<double>{std::log(4.0), 0.0, -800.0, -800.0}, 0, "s2");
  data.add(logits_for(0.95), 0, "s3");
  REQUIRE(max_probability(data.logits(2)) == 0.8);
  const auto sel = select_for_augmentation(data, 0.8);
  CHECK(sel.selected_ids == std::vector<std::string>{"s0", "s1"});
  CHECK(select_for_augmentation(data, 1.0).selected_ids.size() == 4);

  const LogitDataset no_ids(2, {1.0, 0.0}, {0});
  CHECK(kind_of([&] { select_for_augmentation(no_ids, 0.8); }) ==
        ErrorKind::kInvalidInput);
  CHECK_THROWS_AS(select_for_augmentation(data, 0.0), Error);
  CHECK_THROWS_AS(select_for_augmentation(data, 1.5), Error);
}

TEST_CASE("selection fraction matches a direct count") {
  const LogitDataset data = synthetic(ConstantProfile{2.5}, 20000, 11);
  std::size_t below = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = softmax(data.logits(i));
    if (*std::max_element(p.begin(), p.end()) < 0.8) ++below;
  }
  CHECK(select_for_augmentation(data, 0.8).selected_ids.size() == below);
}

TEST_CASE("augmented ids") {
  CHECK(augmentation_source_id("s000001__aug1") == "s000001");
  CHECK(augmentation_source_id("a__aug2__aug13") == "a__aug2");
  CHECK_THROWS_AS(augmentation_source_id("s000001"), Error);
  CHECK_THROWS_AS(augmentation_source_id("__aug1"), Error);
  CHECK_THROWS_AS(augmentation_source_id("x__augA"), Error);
}

TEST_CASE("fit_abts consistency errors") {
  const LogitDataset val = synthetic(ConstantProfile{2.0}, 500, 12);
  const auto selection = select_for_augmentation(val, 0.8);
  REQUIRE(selection.selected_ids.size() > 2);
  const BinSpec spec = bins_confidence_interval(5);

  LogitDataset unknown(val.num_classes());
  unknown.add(val.logits(0), val.label(0), "nope__aug1");
  CHECK(kind_of([&] { fit_abts(val, unknown, selection, spec); }) ==
        ErrorKind::kConsistency);

  std::string unselected;
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (max_probability(val.logits(i)) >= 0.8) {
      unselected = val.id(i);
      break;
    }
  }
  REQUIRE_FALSE(unselected.empty());
  const std::size_t u = *val.find(unselected);
  LogitDataset bad_sel(val.num_classes());
  bad_sel.add(val.logits(u), val.label(u), unselected + "__aug1");
  CHECK(kind_of([&] { fit_abts(val, bad_sel, selection, spec); }) ==
        ErrorKind::kConsistency);

  const std::size_t s = *val.find(selection.selected_ids[0]);
  LogitDataset bad_label(val.num_classes());
  bad_label.add(val.logits(s), (val.label(s) + 1) % val.num_classes(),
                val.id(s) + "__aug1");
  CHECK(kind_of([&] { fit_abts(val, bad_label, selection, spec); }) ==
        ErrorKind::kConsistency);
}

TEST_CASE("fit_abts with nothing augmented equals fit_bts") {
  const LogitDataset val = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 4000, 13);
  const auto selection = select_for_augmentation(val, 0.8);
  for (const BinSpec& spec :
       {bins_confidence_interval(10), bins_by_count(raw_confidences(val), 10)}) {
    const CalibrationMap bts = fit_bts(val, spec);
    CalibrationMap abts =
        fit_abts(val, LogitDataset(val.num_classes()), selection, spec);
    CHECK(abts.method == MapMethod::kAbts);
    abts.method = MapMethod::kBts;
    CHECK(abts == bts);
  }
}

TEST_CASE("fit_abts union size doubles the selected region") {
  const LogitDataset val = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 4000, 14);
  const auto selection = select_for_augmentation(val, 0.8);
  const LogitDataset aug = duplicates(val, selection.selected_ids);
  const CalibrationMap map =
      fit_abts(val, aug, selection, bins_confidence_interval(10));
  std::size_t total = 0;
  for (std::size_t k : map.per_bin_counts) total += k;
  CHECK(total == val.size() + selection.selected_ids.size());
}

TEST_CASE("duplicating every sample leaves interval-binned temperatures") {
  const LogitDataset val = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 4000, 15);
  const auto selection = select_for_augmentation(val, 1.0);
  const LogitDataset aug = duplicates(val, selection.selected_ids);
  BtsConfig config;
  config.min_bin_samples = 1;
  const BinSpec spec = bins_confidence_interval(10);
  const CalibrationMap bts = fit_bts(val, spec, config);
  const CalibrationMap abts = fit_abts(val, aug, selection, spec, config);
  REQUIRE(abts.temperatures.size() == bts.temperatures.size());
  const double tol = 2.0 * config.fit.tolerance;
  for (std::size_t j = 0; j < bts.temperatures.size(); ++j) {
    CHECK(std::abs(1.0 / abts.temperatures[j] - 1.0 / bts.temperatures[j]) <=
          tol);
    CHECK(abts.per_bin_counts[j] == 2 * bts.per_bin_counts[j]);
  }
  CHECK(abts.spec == bts.spec);
}

TEST_CASE("fit_abts rebuilds count bins on the union") {
  const LogitDataset val = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 4000, 16);
  const auto selection = select_for_augmentation(val, 0.8);
  const LogitDataset aug = duplicates(val, selection.selected_ids);
  const BinSpec spec = bins_by_count(raw_confidences(val), 10);
  const CalibrationMap map = fit_abts(val, aug, selection, spec);
  const BinSpec expected =
      bins_by_count(raw_confidences(val.concat(aug)), 10);
  CHECK(map.spec == expected);
}

TEST_CASE("property: maps stay in bounds and never change predicted classes") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const LogitDataset val = synthetic(
        PiecewiseProfile{0.8, rng.uniform(0.5, 2.0), rng.uniform(1.0, 4.0)},
        2000, 100 + trial);
    const LogitDataset test = synthetic(ConstantProfile{1.0}, 1000, 200 + trial);
    const auto selection = select_for_augmentation(val, 0.8);
    std::vector<CalibrationMap> maps{
        fit_ts(val), fit_bts(val, bins_confidence_interval(15)),
        fit_bts(val, bins_by_count(raw_confidences(val), 20)),
        fit_abts(val, duplicates(val, selection.selected_ids), selection,
                 bins_by_count(raw_confidences(val), 20))};
    for (const CalibrationMap& map : maps) {
      CHECK_NOTHROW(map.validate());
      for (double t : map.temperatures) {
        CHECK(t >= map.config.fit.t_min);
        CHECK(t <= map.config.fit.t_max);
      }
      const auto mapped = apply_map(test, map);
      for (std::size_t i = 0; i < test.size(); ++i) {
        CHECK(mapped[i].predicted_class == argmax(test.logits(i)));
      }
    }
  }
}

TEST_CASE("apply_map examples") {
  CalibrationMap identity;
  identity.spec = bins_confidence_interval(1);
  identity.temperatures = {1.0};
  identity.per_bin_counts = {0};
  const LogitDataset data = synthetic(ConstantProfile{1.0}, 200, 17);
  const auto mapped = apply_map(data, identity);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(mapped[i].confidence == predict(data.logits(i)).confidence);
  }

  CalibrationMap two = identity;
  two.temperatures = {2.0};
  const LogitDataset one(2, {2.0, 0.0}, {0});
  const auto p = apply_map(one, two);
  CHECK(p[0].predicted_class == 0);
  CHECK(p[0].confidence == doctest::Approx(0.73106).epsilon(1e-5));

  CalibrationMap split;
  split.spec.edges = {0.0, 0.8, 1.0};
  split.temperatures = {0.5, 3.0};
  split.per_bin_counts = {10, 10};
  split.method = MapMethod::kBts;
  // Raw confidence 0.9 from logits [log 9, 0].
  const std::vector<double> z{std::log(9.0), 0.0};
  const MappedPrediction m = map_sample(z, split);
  CHECK(m.raw_confidence == doctest::Approx(0.9));
  CHECK(m.bin == 1);
  CHECK(m.temperature == 3.0);
  CHECK(m.confidence == doctest::Approx(max_probability(z, 3.0)));
}

TEST_CASE("calibrated_nll matches per-sample temperatures") {
  const LogitDataset val = synthetic(PiecewiseProfile{0.8, 1.2, 3.0}, 3000, 18);
  const CalibrationMap ts = fit_ts(val);
  CHECK(calibrated_nll(val, ts) ==
        doctest::Approx(nll(val, ts.temperatures[0])).epsilon(1e-12));
}
