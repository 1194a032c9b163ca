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

#include "bintemp/synth.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "bintemp/error.hpp"

namespace bintemp {

namespace {

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    fail(ErrorKind::kParse, "invalid number '" + std::string(text) + "' in " +
                                std::string(context));
  }
  return value;
}

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void check_positive(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    fail(ErrorKind::kInvalidInput, std::string(what) + " must be positive");
  }
}

void check_profile(const TemperatureProfile& profile) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    check_positive(c->temperature, "profile temperature");
  } else {
    const auto& p = std::get<PiecewiseProfile>(profile);
    if (!(p.cutoff > 0.0 && p.cutoff < 1.0)) {
      fail(ErrorKind::kInvalidInput, "piecewise cutoff must lie in (0, 1)");
    }
    check_positive(p.t_low, "piecewise t_low");
    check_positive(p.t_high, "piecewise t_high");
  }
}

}  // namespace

TemperatureProfile parse_profile(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    fail(ErrorKind::kParse, "profile must be const:T or "
                            "piecewise:cutoff,t_low,t_high");
  }
  const auto kind = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  TemperatureProfile profile;
  if (kind == "const") {
    profile = ConstantProfile{parse_number(args, "const profile")};
  } else if (kind == "piecewise") {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
      const auto comma = args.find(',', start);
      values.push_back(parse_number(
          args.substr(start, comma == std::string_view::npos ? args.npos
                                                             : comma - start),
          "piecewise profile"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (values.size() != 3) {
      fail(ErrorKind::kParse, "piecewise profile takes cutoff,t_low,t_high");
    }
    profile = PiecewiseProfile{values[0], values[1], values[2]};
  } else {
    fail(ErrorKind::kParse, "unknown profile kind '" + std::string(kind) + "'");
  }
  check_profile(profile);
  return profile;
}

std::string format_profile(const TemperatureProfile& profile) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    return "const:" + shortest(c->temperature);
  }
  const auto& p = std::get<PiecewiseProfile>(profile);
  return "piecewise:" + shortest(p.cutoff) + "," + shortest(p.t_low) + "," +
         shortest(p.t_high);
}

double true_temperature(const TemperatureProfile& profile,
                        std::span<const double> z) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    return c->temperature;
  }
  const auto& p = std::get<PiecewiseProfile>(profile);
  return max_probability(z) < p.cutoff ? p.t_low : p.t_high;
}

void SynthConfig::validate() const {
  if (n_samples < 1) fail(ErrorKind::kInvalidInput, "n_samples must be >= 1");
  if (n_classes < 2) fail(ErrorKind::kInvalidInput, "n_classes must be >= 2");
  check_positive(logit_scale, "logit_scale");
  check_profile(profile);
}

std::size_t sample_label(Rng& rng, std::span<const double> z, double t) {
  const std::vector<double> p = scaled_softmax(z, t);
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    cumulative += p[c];
    if (u < cumulative) return c;
  }
  // u landed in the rounding gap above the final cumulative sum.
  for (std::size_t c = p.size(); c-- > 0;) {
    if (p[c] > 0.0) return c;
  }
  return p.size() - 1;
}

void draw_sample(Rng& rng, const SynthConfig& config, std::span<double> z,
                 std::size_t& label) {
  for (double& v : z) v = config.logit_scale * rng.gaussian();
  label = sample_label(rng, z, true_temperature(config.profile, z));
}

std::string synth_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06zu", index);
  return buf;
}

LogitDataset generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<double> logits(config.n_samples * config.n_classes);
  std::vector<std::size_t> labels(config.n_samples);
  std::vector<std::string> ids(config.n_samples);
  for (std::size_t i = 0; i < config.n_samples; ++i) {
    std::span<double> z(logits.data() + i * config.n_classes, config.n_classes);
    draw_sample(rng, config, z, labels[i]);
    ids[i] = synth_id(i);
  }
  return LogitDataset(config.n_classes, std::move(logits), std::move(labels),
                      std::move(ids));
}

}  // namespace bintemp
