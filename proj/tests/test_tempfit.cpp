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

#include <cmath>
#include <vector>

#include "bintemp/error.hpp"
#include "bintemp/metrics.hpp"
#include "bintemp/rng.hpp"
#include "bintemp/synth.hpp"
#include "bintemp/tempfit.hpp"
#include "oracles.hpp"

using namespace bintemp;

namespace {

LogitDataset synthetic(double t_star, std::size_t n, std::uint64_t seed) {
  SynthConfig config;
  config.n_samples = n;
  config.profile = ConstantProfile{t_star};
  config.seed = seed;
  return generate(config);
}

}  // namespace

TEST_CASE("conflicting confident samples clamp to t_max") {
  const LogitDataset data(2, {4.0, 0.0, 4.0, 0.0}, {0, 1});
  const FitResult r = fit_temperature(data);
  CHECK(r.clamped);
  CHECK(r.temperature == 20.0);
  CHECK(r.final_nll == doctest::Approx(nll(data, 20.0)));
}

TEST_CASE("one correct confident sample clamps to t_min") {
  const LogitDataset data(2, {4.0, 0.0}, {0});
  const FitResult r = fit_temperature(data);
  CHECK(r.clamped);
  CHECK(r.temperature == 0.05);
}

TEST_CASE("recovers the generating temperature") {
  const LogitDataset data = synthetic(2.5, 50000, 1);
  const FitResult r = fit_temperature(data);
  CHECK_FALSE(r.clamped);
  CHECK(std::abs(r.temperature - 2.5) <= 0.05);
  CHECK(r.iterations <= FitConfig{}.max_iterations);
}

TEST_CASE("the fitted point is stationary") {
  const LogitDataset data = synthetic(1.7, 2000, 8);
  const auto all = oracle::all_indices(data);
  const FitResult r = fit_temperature(data);
  const double slope = oracle::nll_slope_in_inverse_t(data, 1.0 / r.temperature, all);
  CHECK(std::abs(slope) < 1e-4);
}

TEST_CASE("subset fits only see their members") {
  const LogitDataset data = synthetic(2.0, 4000, 12);
  std::vector<std::size_t> half;
  for (std::size_t i = 0; i < data.size(); i += 2) half.push_back(i);
  LogitDataset copy(data.num_classes());
  for (std::size_t i : half) copy.add(data.logits(i), data.label(i));
  CHECK(fit_temperature(data, half).temperature ==
        fit_temperature(copy).temperature);
  CHECK_THROWS_AS(fit_temperature(data, std::vector<std::size_t>{}), Error);
}

TEST_CASE("grid_oracle examples") {
  const LogitDataset data = synthetic(2.5, 50000, 2);
  const auto all = oracle::all_indices(data);
  const std::vector<double> single{1.0};
  CHECK(grid_oracle(data, all, single) == 1.0);

  std::vector<double> grid;
  for (int k = 0; k <= 90; ++k) grid.push_back(0.5 + 0.05 * k);
  CHECK(std::abs(grid_oracle(data, all, grid) - 2.5) <= 0.05 + 1e-12);

  const LogitDataset conflict(2, {4.0, 0.0, 4.0, 0.0}, {0, 1});
  const std::vector<std::size_t> both{0, 1};
  const std::vector<double> wide{0.1, 1.0, 10.0, 50.0};
  CHECK(grid_oracle(conflict, both, wide) == 50.0);

  CHECK_THROWS_AS(grid_oracle(data, all, std::vector<double>{}), Error);
  CHECK_THROWS_AS(grid_oracle(data, std::vector<std::size_t>{}, single), Error);
}

TEST_CASE("property: agreement with the grid oracle") {
  Rng pick(77);
  for (int k = 0; k < 20; ++k) {
    const double t_star = pick.uniform(0.5, 4.0);
    const LogitDataset data = synthetic(t_star, 2000, 1000 + k);
    const auto all = oracle::all_indices(data);
    std::vector<double> grid;
    for (int j = 5; j <= 2000; ++j) grid.push_back(1.0 / (0.01 * j));
    const FitConfig config;
    const FitResult r = fit_temperature(data, all, config);
    const double t_grid = grid_oracle(data, all, grid);
    CHECK(std::abs(1.0 / r.temperature - 1.0 / t_grid) <=
          0.01 + config.tolerance);
  }
}

TEST_CASE("property: never worse than t = 1 and deterministic") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthConfig config;
    config.n_samples = 1000;
    config.profile = PiecewiseProfile{0.7, 0.8, 2.0};
    config.seed = seed;
    const LogitDataset data = generate(config);
    const FitResult a = fit_temperature(data);
    const FitResult b = fit_temperature(data);
    CHECK(a.temperature == b.temperature);
    CHECK(a.final_nll == b.final_nll);
    CHECK(a.iterations == b.iterations);
    CHECK(a.final_nll <= nll(data, 1.0));
    CHECK(a.temperature >= 0.05);
    CHECK(a.temperature <= 20.0);
  }
}

TEST_CASE("config validation") {
  const LogitDataset data(2, {1.0, 0.0}, {0});
  FitConfig bad;
  bad.t_min = 2.0;
  bad.t_max = 1.0;
  CHECK_THROWS_AS(fit_temperature(data, bad), Error);
  bad = FitConfig{};
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(fit_temperature(data, bad), Error);
  bad = FitConfig{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(fit_temperature(data, bad), Error);
}
