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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <numeric>
#include <sstream>

#include "bintemp/augment.hpp"
#include "bintemp/binning.hpp"
#include "bintemp/calibration.hpp"
#include "bintemp/core.hpp"
#include "bintemp/error.hpp"
#include "bintemp/io.hpp"
#include "bintemp/metrics.hpp"
#include "bintemp/svg.hpp"
#include "bintemp/synth.hpp"
#include "bintemp/tempfit.hpp"

namespace py = pybind11;
using namespace bintemp;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

LogitDataset make_dataset(DoubleArray logits, const std::vector<std::size_t>& labels,
                          std::optional<std::vector<std::string>> ids) {
  if (logits.ndim() != 2) throw py::value_error("logits must be a 2-D array");
  const auto rows = static_cast<std::size_t>(logits.shape(0));
  const auto cols = static_cast<std::size_t>(logits.shape(1));
  if (rows != labels.size()) {
    throw py::value_error("logits and labels disagree on the sample count");
  }
  std::vector<double> flat(logits.data(), logits.data() + rows * cols);
  return LogitDataset(cols, std::move(flat), labels, ids.value_or(std::vector<std::string>{}));
}

DoubleArray dataset_logits(const LogitDataset& data) {
  DoubleArray out({data.size(), data.num_classes()});
  std::memcpy(out.mutable_data(), data.flat_logits().data(),
              data.flat_logits().size() * sizeof(double));
  return out;
}

RasterImage to_image(ByteArray array) {
  if (array.ndim() == 2) {
    return RasterImage(static_cast<int>(array.shape(1)), static_cast<int>(array.shape(0)), 1,
                       std::vector<std::uint8_t>(array.data(), array.data() + array.size()));
  }
  if (array.ndim() == 3 && array.shape(2) == 3) {
    return RasterImage(static_cast<int>(array.shape(1)), static_cast<int>(array.shape(0)), 3,
                       std::vector<std::uint8_t>(array.data(), array.data() + array.size()));
  }
  throw py::value_error("images must be (H, W) or (H, W, 3) uint8 arrays");
}

ByteArray from_image(const RasterImage& img) {
  std::vector<py::ssize_t> shape{img.height(), img.width()};
  if (img.channels() == 3) shape.push_back(3);
  ByteArray out(shape);
  std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
  return out;
}

std::vector<ScoredPrediction> to_scored(const std::vector<double>& confidences,
                                        const std::vector<bool>& correct) {
  if (confidences.size() != correct.size()) {
    throw py::value_error("confidences and correct must have equal length");
  }
  std::vector<ScoredPrediction> out(confidences.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {confidences[i], correct[i]};
  return out;
}

}  // namespace

PYBIND11_MODULE(_bintemp, m) {
  m.doc() = "Temperature scaling and bin-wise temperature scaling for classifier logits";

  py::register_exception<Error>(m, "BintempError", PyExc_ValueError);

  py::class_<LogitDataset>(m, "LogitDataset")
      .def(py::init(&make_dataset), py::arg("logits"), py::arg("labels"),
           py::arg("ids") = py::none())
      .def("__len__", &LogitDataset::size)
      .def_property_readonly("num_classes", &LogitDataset::num_classes)
      .def_property_readonly("logits", &dataset_logits)
      .def_property_readonly("labels", &LogitDataset::labels)
      .def_property_readonly("ids", &LogitDataset::ids)
      .def("concat", &LogitDataset::concat);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("predicted_class", &Prediction::predicted_class)
      .def_readonly("confidence", &Prediction::confidence);

  m.def("softmax", [](const std::vector<double>& z) { return softmax(z); });
  m.def("scaled_softmax",
        [](const std::vector<double>& z, double t) { return scaled_softmax(z, t); });
  m.def("predict", [](const std::vector<double>& z, double t) { return predict(z, t); },
        py::arg("z"), py::arg("t") = 1.0);
  m.def("raw_confidences", &raw_confidences, py::arg("data"),
        "Uncalibrated (t = 1) confidence of every sample.");

  py::class_<ReliabilityBin>(m, "ReliabilityBin")
      .def_readonly("lower", &ReliabilityBin::lower)
      .def_readonly("upper", &ReliabilityBin::upper)
      .def_readonly("count", &ReliabilityBin::count)
      .def_readonly("accuracy", &ReliabilityBin::accuracy)
      .def_readonly("avg_confidence", &ReliabilityBin::avg_confidence);
  py::class_<ReliabilityReport>(m, "ReliabilityReport")
      .def_readonly("bins", &ReliabilityReport::bins)
      .def_readonly("total_samples", &ReliabilityReport::total_samples)
      .def("to_csv", [](const ReliabilityReport& r) {
        std::ostringstream out;
        io::write_report_csv(out, r);
        return out.str();
      });

  m.def("reliability",
        [](const std::vector<double>& conf, const std::vector<bool>& correct, std::size_t n_bins) {
          return reliability(to_scored(conf, correct), n_bins);
        },
        py::arg("confidences"), py::arg("correct"), py::arg("n_bins") = kDefaultEceBins);
  m.def("ece", &ece);
  m.def("ece_of",
        [](const std::vector<double>& conf, const std::vector<bool>& correct, std::size_t n_bins) {
          return ece(reliability(to_scored(conf, correct), n_bins));
        },
        py::arg("confidences"), py::arg("correct"), py::arg("n_bins") = kDefaultEceBins);
  m.def("nll",
        [](const LogitDataset& data, double t, std::optional<std::vector<std::size_t>> subset) {
          return subset ? nll(data, t, *subset) : nll(data, t);
        },
        py::arg("data"), py::arg("t") = 1.0, py::arg("subset") = py::none());

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def(py::init([](double t_min, double t_max, double tolerance, int max_iterations) {
             FitConfig c{t_min, t_max, tolerance, max_iterations};
             c.validate();
             return c;
           }),
           py::arg("t_min") = 0.05, py::arg("t_max") = 20.0, py::arg("tolerance") = 1e-6,
           py::arg("max_iterations") = 200)
      .def_readwrite("t_min", &FitConfig::t_min)
      .def_readwrite("t_max", &FitConfig::t_max)
      .def_readwrite("tolerance", &FitConfig::tolerance)
      .def_readwrite("max_iterations", &FitConfig::max_iterations);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("temperature", &FitResult::temperature)
      .def_readonly("final_nll", &FitResult::final_nll)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("clamped", &FitResult::clamped);

  m.def("fit_temperature",
        [](const LogitDataset& data, std::optional<std::vector<std::size_t>> subset,
           const FitConfig& config) {
          return subset ? fit_temperature(data, *subset, config) : fit_temperature(data, config);
        },
        py::arg("data"), py::arg("subset") = py::none(), py::arg("config") = FitConfig{});
  m.def("grid_oracle",
        [](const LogitDataset& data, const std::vector<double>& grid) {
          std::vector<std::size_t> all(data.size());
          std::iota(all.begin(), all.end(), std::size_t{0});
          return grid_oracle(data, all, grid);
        },
        py::arg("data"), py::arg("grid"));

  py::enum_<BinMethod>(m, "BinMethod")
      .value("CONFIDENCE_INTERVAL", BinMethod::kConfidenceInterval)
      .value("BY_COUNT", BinMethod::kByCount);
  py::class_<BinSpec>(m, "BinSpec")
      .def_readonly("edges", &BinSpec::edges)
      .def_readonly("method", &BinSpec::method)
      .def_readonly("high_conf_threshold", &BinSpec::high_conf_threshold)
      .def_readonly("requested_bins", &BinSpec::requested_bins)
      .def_property_readonly("num_bins", &BinSpec::num_bins);
  m.def("bins_confidence_interval", &bins_confidence_interval, py::arg("n_bins"));
  m.def("bins_by_count",
        [](const std::vector<double>& conf, std::size_t n_bins, double threshold) {
          return bins_by_count(conf, n_bins, threshold);
        },
        py::arg("confidences"), py::arg("n_bins"), py::arg("threshold") = kHighConfidenceThreshold);
  m.def("assign_bin", &assign_bin, py::arg("confidence"), py::arg("spec"));

  py::enum_<MapMethod>(m, "MapMethod")
      .value("TS", MapMethod::kTs)
      .value("BTS", MapMethod::kBts)
      .value("ABTS", MapMethod::kAbts);
  py::class_<BtsConfig>(m, "BtsConfig")
      .def(py::init<>())
      .def_readwrite("fit", &BtsConfig::fit)
      .def_readwrite("min_bin_samples", &BtsConfig::min_bin_samples);
  py::class_<CalibrationMap>(m, "CalibrationMap")
      .def_readonly("spec", &CalibrationMap::spec)
      .def_readonly("temperatures", &CalibrationMap::temperatures)
      .def_readonly("fallback_temperature", &CalibrationMap::fallback_temperature)
      .def_readonly("per_bin_counts", &CalibrationMap::per_bin_counts)
      .def_readonly("method", &CalibrationMap::method)
      .def_readonly("num_classes", &CalibrationMap::num_classes)
      .def("to_json", [](const CalibrationMap& map) { return io::map_to_json({map, {}}); })
      .def_static("from_json", [](const std::string& text) { return io::map_from_json(text).map; })
      .def("__eq__", [](const CalibrationMap& a, const CalibrationMap& b) { return a == b; });

  py::class_<AugmentationSelection>(m, "AugmentationSelection")
      .def_readonly("cutoff", &AugmentationSelection::cutoff)
      .def_readonly("selected_ids", &AugmentationSelection::selected_ids);

  m.def("fit_ts", &fit_ts, py::arg("validation"), py::arg("config") = FitConfig{});
  m.def("fit_bts", &fit_bts, py::arg("validation"), py::arg("spec"),
        py::arg("config") = BtsConfig{});
  m.def("select_for_augmentation", &select_for_augmentation, py::arg("validation"),
        py::arg("cutoff") = kDefaultAugmentCutoff);
  m.def("fit_abts", &fit_abts, py::arg("validation"), py::arg("augmented"),
        py::arg("selection"), py::arg("spec"), py::arg("config") = BtsConfig{});
  m.def("apply_map",
        [](const LogitDataset& data, const CalibrationMap& map) {
          const auto mapped = apply_map_detailed(data, map);
          py::array_t<std::int64_t> cls(static_cast<py::ssize_t>(mapped.size()));
          DoubleArray conf(static_cast<py::ssize_t>(mapped.size()));
          py::array_t<std::int64_t> bins(static_cast<py::ssize_t>(mapped.size()));
          for (std::size_t i = 0; i < mapped.size(); ++i) {
            cls.mutable_at(i) = static_cast<std::int64_t>(mapped[i].predicted_class);
            conf.mutable_at(i) = mapped[i].confidence;
            bins.mutable_at(i) = static_cast<std::int64_t>(mapped[i].bin);
          }
          return py::make_tuple(cls, conf, bins);
        },
        "Returns (predicted_class, calibrated_confidence, bin_index) arrays.");
  m.def("calibrated_nll", &calibrated_nll);

  m.def("generate",
        [](std::size_t n, std::size_t classes, const std::string& profile, double scale,
           std::uint64_t seed) {
          SynthConfig config;
          config.n_samples = n;
          config.n_classes = classes;
          config.profile = parse_profile(profile);
          config.logit_scale = scale;
          config.seed = seed;
          return generate(config);
        },
        py::arg("n_samples"), py::arg("n_classes") = 10, py::arg("profile") = "const:1",
        py::arg("logit_scale") = 4.0, py::arg("seed") = 0);

  m.def("shift_x", [](ByteArray img, int dx) { return from_image(shift_x(to_image(img), dx)); });
  m.def("brightness",
        [](ByteArray img, int delta) { return from_image(brightness(to_image(img), delta)); });
  m.def("linear_contrast",
        [](ByteArray img, double alpha) { return from_image(linear_contrast(to_image(img), alpha)); });
  m.def("gaussian_blur",
        [](ByteArray img, double sigma) { return from_image(gaussian_blur(to_image(img), sigma)); });
  m.def("apply_random",
        [](ByteArray img, const std::string& op, std::uint64_t seed, std::uint64_t draw_index) {
          return from_image(apply_random(to_image(img), parse_augment_op(op, seed), draw_index));
        },
        py::arg("image"), py::arg("op"), py::arg("seed") = 0, py::arg("draw_index") = 0);

  m.def("read_logits_csv", [](const std::string& path) { return io::read_logits_csv(path); });
  m.def("write_logits_csv",
        [](const std::string& path, const LogitDataset& data) { io::write_logits_csv(path, data); });
  m.def("render_reliability_svg", &render_reliability_svg, py::arg("report"),
        py::arg("title") = "");
}
