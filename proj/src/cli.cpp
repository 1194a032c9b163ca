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

#include "bintemp/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bintemp/augment.hpp"
#include "bintemp/calibration.hpp"
#include "bintemp/error.hpp"
#include "bintemp/io.hpp"
#include "bintemp/metrics.hpp"
#include "bintemp/svg.hpp"
#include "bintemp/synth.hpp"

namespace bintemp::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct FitOptions {
  std::string method;
  std::string binning = "count";
  std::size_t bins = 50;
  std::string val;
  std::string aug;
  double cutoff = kDefaultAugmentCutoff;
  double threshold = kHighConfidenceThreshold;
  std::size_t min_bin_samples = kDefaultMinBinSamples;
  FitConfig fit;
  std::string out;
};

struct ApplyOptions {
  std::string map;
  std::string in;
  std::string out;
};

struct EvalOptions {
  std::string in;
  std::string map;
  std::size_t ece_bins = kDefaultEceBins;
  std::string report;
  std::string svg;
};

struct SelectOptions {
  std::string val;
  double cutoff = kDefaultAugmentCutoff;
  std::string out;
};

struct SynthOptions {
  std::size_t n = 10000;
  std::size_t classes = 10;
  std::string profile = "const:1";
  double scale = 4.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct AugmentOptions {
  std::string in_dir;
  std::string ids;
  std::string op;
  std::uint64_t seed = 0;
  std::size_t index = 1;
  std::string out_dir;
};

BinSpec make_spec(const FitOptions& o, const LogitDataset& val) {
  switch (parse_bin_method(o.binning)) {
    case BinMethod::kConfidenceInterval:
      return bins_confidence_interval(o.bins);
    case BinMethod::kByCount:
      return bins_by_count(raw_confidences(val), o.bins, o.threshold);
  }
  return bins_confidence_interval(o.bins);
}

int cmd_fit(const FitOptions& o, std::ostream& out) {
  const MapMethod method = parse_map_method(o.method);
  const LogitDataset val = io::read_logits_csv(o.val);
  io::MapDocument doc;
  doc.provenance.inputs.push_back({"validation", o.val, io::sha256_file(o.val)});

  BtsConfig config{o.fit, o.min_bin_samples};
  switch (method) {
    case MapMethod::kTs:
      doc.map = fit_ts(val, o.fit);
      break;
    case MapMethod::kBts:
      doc.map = fit_bts(val, make_spec(o, val), config);
      break;
    case MapMethod::kAbts: {
      if (o.aug.empty()) {
        fail(ErrorKind::kInvalidInput, "--method abts requires --aug FILE");
      }
      const LogitDataset aug = io::read_logits_csv(o.aug);
      doc.provenance.inputs.push_back({"augmented", o.aug, io::sha256_file(o.aug)});
      const auto selection = select_for_augmentation(val, o.cutoff);
      doc.map = fit_abts(val, aug, selection, make_spec(o, val), config);
      out << "augmentation: " << selection.selected_ids.size()
          << " selected samples, " << aug.size() << " augmented records\n";
      break;
    }
  }

  const CalibrationMap& map = doc.map;
  out << "method: " << to_string(map.method) << ", "
      << map.spec.num_bins() << " bin(s), fallback temperature "
      << fixed(map.fallback_temperature, 6) << '\n';
  for (std::size_t j = 0; j < map.spec.num_bins(); ++j) {
    out << "  bin " << j << " (" << fixed(map.spec.lower(j), 6) << ", "
        << fixed(map.spec.upper(j), 6) << "] n=" << map.per_bin_counts[j]
        << " t=" << fixed(map.temperatures[j], 6)
        << (map.method != MapMethod::kTs && map.uses_fallback(j) ? " (fallback)"
                                                                  : "")
        << '\n';
  }
  out << "validation NLL: " << fixed(nll(val, 1.0), 6) << " -> "
      << fixed(calibrated_nll(val, map), 6) << '\n';
  io::save_map(o.out, doc);
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

int cmd_apply(const ApplyOptions& o, std::ostream& out) {
  const io::MapDocument doc = io::load_map(o.map);
  const LogitDataset data = io::read_logits_csv(o.in);
  if (doc.map.num_classes != 0 && doc.map.num_classes != data.num_classes()) {
    fail(ErrorKind::kConsistency,
         "map was fitted on " + std::to_string(doc.map.num_classes) +
             " classes but " + o.in + " has " +
             std::to_string(data.num_classes()));
  }
  const auto mapped = apply_map_detailed(data, doc.map);
  std::ostringstream csv;
  csv << "id,label,predicted,confidence_raw,confidence_calibrated,bin_index\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = mapped[i];
    csv << (data.has_ids() ? data.id(i) : std::to_string(i)) << ','
        << data.label(i) << ',' << p.predicted_class << ','
        << io::format_double(p.raw_confidence) << ','
        << io::format_double(p.confidence) << ',' << p.bin << '\n';
  }
  io::write_file(o.out, csv.str());
  out << "calibrated " << data.size() << " samples -> " << o.out << '\n';
  return kExitOk;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const LogitDataset data = io::read_logits_csv(o.in);
  std::vector<ScoredPrediction> scored;
  double loss = 0.0;
  if (o.map.empty()) {
    scored = score_uncalibrated(data);
    loss = nll(data, 1.0);
  } else {
    const io::MapDocument doc = io::load_map(o.map);
    if (doc.map.num_classes != 0 && doc.map.num_classes != data.num_classes()) {
      fail(ErrorKind::kConsistency, "map class count does not match input");
    }
    const auto predictions = apply_map(data, doc.map);
    scored = score(data, predictions);
    loss = calibrated_nll(data, doc.map);
  }
  const ReliabilityReport report = reliability(scored, o.ece_bins);
  const double ece_value = ece(report);
  out << "samples: " << data.size() << '\n'
      << "accuracy: " << fixed(accuracy(scored), 4) << '\n'
      << "NLL: " << fixed(loss, 4) << '\n'
      << "ECE: " << fixed(ece_value, 4) << '\n';
  if (!o.report.empty()) {
    std::ostringstream csv;
    io::write_report_csv(csv, report);
    io::write_file(o.report, csv.str());
  }
  if (!o.svg.empty()) {
    const std::string title =
        fs::path(o.in).filename().string() + (o.map.empty() ? "" : " (calibrated)");
    io::write_file(o.svg, render_reliability_svg(report, title));
  }
  return kExitOk;
}

int cmd_select(const SelectOptions& o, std::ostream& out) {
  const LogitDataset val = io::read_logits_csv(o.val);
  const auto selection = select_for_augmentation(val, o.cutoff);
  std::ostringstream list;
  io::write_id_list(list, selection.selected_ids);
  io::write_file(o.out, list.str());
  out << "selected " << selection.selected_ids.size() << " of " << val.size()
      << " samples with confidence < " << o.cutoff << '\n';
  return kExitOk;
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  SynthConfig config;
  config.n_samples = o.n;
  config.n_classes = o.classes;
  config.logit_scale = o.scale;
  config.profile = parse_profile(o.profile);
  config.seed = o.seed;
  io::write_logits_csv(o.out, generate(config));
  out << "wrote " << o.n << " samples (" << format_profile(config.profile)
      << ", seed " << o.seed << ") to " << o.out << '\n';
  return kExitOk;
}

int cmd_augment(const AugmentOptions& o, std::ostream& out) {
  const AugmentOp op = parse_augment_op(o.op, o.seed);
  if (o.index < 1) fail(ErrorKind::kInvalidInput, "--index must be >= 1");
  const auto ids = io::read_id_list(o.ids);
  const fs::path in_dir(o.in_dir);
  const fs::path out_dir(o.out_dir);

  // Resolve every input first so a missing image leaves nothing behind.
  std::vector<fs::path> sources;
  sources.reserve(ids.size());
  for (const auto& id : ids) {
    const fs::path ppm = in_dir / (id + ".ppm");
    const fs::path pgm = in_dir / (id + ".pgm");
    if (fs::exists(ppm)) {
      sources.push_back(ppm);
    } else if (fs::exists(pgm)) {
      sources.push_back(pgm);
    } else {
      fail(ErrorKind::kIo, "no image for sample '" + id + "' (looked for " +
                               ppm.string() + " and " + pgm.string() + ")");
    }
  }
  fs::create_directories(out_dir);
  const std::uint64_t base = (o.index - 1) * ids.size();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const RasterImage img = io::read_pnm(sources[k]);
    const RasterImage aug = apply_random(img, op, base + k);
    const std::string name = ids[k] + std::string(kAugmentSuffix) +
                             std::to_string(o.index) +
                             sources[k].extension().string();
    io::write_pnm(out_dir / name, aug);
  }
  out << "augmented " << ids.size() << " images -> " << o.out_dir << '\n';
  return kExitOk;
}

void add_fit_flags(CLI::App* cmd, FitConfig& fit) {
  cmd->add_option("--t-min", fit.t_min, "Lower temperature bound")
      ->capture_default_str();
  cmd->add_option("--t-max", fit.t_max, "Upper temperature bound")
      ->capture_default_str();
  cmd->add_option("--tol", fit.tolerance,
                  "Convergence width on the inverse-temperature axis")
      ->capture_default_str();
  cmd->add_option("--max-iter", fit.max_iterations, "Golden-section iterations")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Temperature scaling, bin-wise temperature scaling and "
               "augmentation-based bin-wise scaling for classifier logits",
               "bintemp"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a calibration map");
  fit_cmd->add_option("--method", fit.method, "ts | bts | abts")->required()
      ->check(CLI::IsMember({"ts", "bts", "abts"}));
  fit_cmd->add_option("--binning", fit.binning, "interval | count")
      ->check(CLI::IsMember({"interval", "count"}))->capture_default_str();
  fit_cmd->add_option("--bins", fit.bins, "Number of fitting bins")
      ->capture_default_str();
  fit_cmd->add_option("--val", fit.val, "Validation logits CSV")->required();
  fit_cmd->add_option("--aug", fit.aug, "Augmented logits CSV (abts)");
  fit_cmd->add_option("--cutoff", fit.cutoff,
                      "Augment samples with confidence below this (abts)")
      ->capture_default_str();
  fit_cmd->add_option("--threshold", fit.threshold,
                      "High-confidence bin threshold for count binning")
      ->capture_default_str();
  fit_cmd->add_option("--min-bin-samples", fit.min_bin_samples,
                      "Bins with fewer samples use the global temperature")
      ->capture_default_str();
  add_fit_flags(fit_cmd, fit.fit);
  fit_cmd->add_option("--out", fit.out, "Output map JSON")->required();

  ApplyOptions apply;
  auto* apply_cmd = app.add_subcommand("apply", "Calibrate logits with a map");
  apply_cmd->add_option("--map", apply.map, "Calibration map JSON")->required();
  apply_cmd->add_option("--in", apply.in, "Logits CSV")->required();
  apply_cmd->add_option("--out", apply.out, "Output predictions CSV")->required();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "ECE, NLL and accuracy");
  eval_cmd->add_option("--in", eval.in, "Logits CSV")->required();
  eval_cmd->add_option("--map", eval.map, "Apply this map first");
  eval_cmd->add_option("--ece-bins", eval.ece_bins, "Evaluation bins")
      ->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--report", eval.report, "Reliability report CSV");
  eval_cmd->add_option("--svg", eval.svg, "Reliability diagram SVG");

  SelectOptions select;
  auto* select_cmd = app.add_subcommand(
      "select-augment", "List validation IDs to augment");
  select_cmd->add_option("--val", select.val, "Validation logits CSV")
      ->required();
  select_cmd->add_option("--cutoff", select.cutoff, "Confidence cutoff")
      ->capture_default_str();
  select_cmd->add_option("--out", select.out, "Output ID list")->required();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic logits");
  synth_cmd->add_option("--n", synth.n, "Number of samples")
      ->capture_default_str();
  synth_cmd->add_option("--classes", synth.classes, "Number of classes")
      ->capture_default_str();
  synth_cmd->add_option("--profile", synth.profile,
                        "const:T | piecewise:cutoff,t_low,t_high")
      ->capture_default_str();
  synth_cmd->add_option("--scale", synth.scale, "Logit standard deviation")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output logits CSV")->required();

  AugmentOptions augment;
  auto* augment_cmd = app.add_subcommand("augment", "Augment PPM/PGM images");
  augment_cmd->add_option("--in-dir", augment.in_dir, "Directory of <id>.ppm")
      ->required();
  augment_cmd->add_option("--ids", augment.ids, "ID list")->required();
  augment_cmd->add_option("--op", augment.op,
                          "shift:lo,hi | bright:lo,hi | contrast:alpha | "
                          "blur:lo,hi")
      ->required();
  augment_cmd->add_option("--seed", augment.seed, "Random seed")
      ->capture_default_str();
  augment_cmd->add_option("--index", augment.index,
                          "Augmentation pass k, written as <id>__aug<k>")
      ->capture_default_str();
  augment_cmd->add_option("--out-dir", augment.out_dir, "Output directory")
      ->required();

  std::vector<const char*> argv{"bintemp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (apply_cmd->parsed()) return cmd_apply(apply, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (select_cmd->parsed()) return cmd_select(select, out);
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (augment_cmd->parsed()) return cmd_augment(augment, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bintemp::cli
