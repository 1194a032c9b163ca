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

#include "bintemp/io.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bintemp/error.hpp"

namespace bintemp::io {

using json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::kParse, "'" + std::string(text) + "' is not a number");
  }
  return value;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Reads one line without its terminator (LF or CRLF). False at end of input.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::size_t parse_index(std::string_view text) {
  std::size_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::kParse,
         "'" + std::string(text) + "' is not a non-negative integer");
  }
  return value;
}

[[noreturn]] void row_error(std::size_t line_no, const std::string& what) {
  fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

LogitDataset read_logits_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) fail(ErrorKind::kParse, "logits file is empty");
  const auto header = split(line, ',');
  const bool has_id = !header.empty() && header[0] == "id";
  const std::size_t first_logit = has_id ? 2 : 1;
  if (header.size() <= first_logit || header[first_logit - 1] != "label") {
    row_error(1, "header must be id,label,z0,... or label,z0,...");
  }
  const std::size_t num_classes = header.size() - first_logit;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (header[first_logit + c] != "z" + std::to_string(c)) {
      row_error(1, "expected column z" + std::to_string(c) + ", found '" +
                       std::string(header[first_logit + c]) + "'");
    }
  }
  if (num_classes < 2) row_error(1, "need at least two logit columns");

  std::vector<double> logits;
  std::vector<std::size_t> labels;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      row_error(line_no, "expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(fields.size()));
    }
    auto index_field = [&](std::string_view f) {
      try {
        return parse_index(f);
      } catch (const Error& e) {
        row_error(line_no, e.what());
      }
    };
    auto real_field = [&](std::string_view f) {
      try {
        return parse_double(f);
      } catch (const Error& e) {
        row_error(line_no, e.what());
      }
    };
    if (has_id) {
      if (fields[0].empty()) row_error(line_no, "empty sample id");
      ids.emplace_back(fields[0]);
    }
    const std::size_t label = index_field(fields[first_logit - 1]);
    if (label >= num_classes) {
      row_error(line_no, "label " + std::to_string(label) +
                             " out of range for " +
                             std::to_string(num_classes) + " classes");
    }
    labels.push_back(label);
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double v = real_field(fields[first_logit + c]);
      if (!std::isfinite(v)) row_error(line_no, "non-finite logit");
      logits.push_back(v);
    }
  }
  try {
    return LogitDataset(num_classes, std::move(logits), std::move(labels),
                        std::move(ids));
  } catch (const Error& e) {
    fail(ErrorKind::kParse, e.what());
  }
}

LogitDataset read_logits_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_logits_csv(in);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void write_logits_csv(std::ostream& out, const LogitDataset& data) {
  if (data.has_ids()) out << "id,";
  out << "label";
  for (std::size_t c = 0; c < data.num_classes(); ++c) out << ",z" << c;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.has_ids()) {
      if (data.id(i).find_first_of(",\n\r") != std::string::npos) {
        fail(ErrorKind::kInvalidInput,
             "sample id '" + data.id(i) + "' cannot be written to CSV");
      }
      out << data.id(i) << ',';
    }
    out << data.label(i);
    for (double v : data.logits(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_logits_csv(const std::filesystem::path& path,
                      const LogitDataset& data) {
  std::ostringstream out;
  write_logits_csv(out, data);
  write_file(path, out.str());
}

std::string map_to_json(const MapDocument& doc) {
  const CalibrationMap& map = doc.map;
  json binning;
  binning["method"] = std::string(to_string(map.spec.method));
  binning["edges"] = map.spec.edges;
  binning["high_conf_threshold"] =
      map.spec.high_conf_threshold ? json(*map.spec.high_conf_threshold)
                                   : json(nullptr);
  binning["requested_bins"] = map.spec.requested_bins;

  json inputs = json::array();
  for (const auto& input : doc.provenance.inputs) {
    inputs.push_back(
        {{"role", input.role}, {"path", input.path}, {"sha256", input.sha256}});
  }

  json root;
  root["format_version"] = kMapFormatVersion;
  root["method"] = std::string(to_string(map.method));
  root["num_classes"] = map.num_classes;
  root["binning"] = std::move(binning);
  root["temperatures"] = map.temperatures;
  root["fallback_temperature"] = map.fallback_temperature;
  root["per_bin_counts"] = map.per_bin_counts;
  root["fit_config"] = {{"t_min", map.config.fit.t_min},
                        {"t_max", map.config.fit.t_max},
                        {"tolerance", map.config.fit.tolerance},
                        {"max_iterations", map.config.fit.max_iterations},
                        {"min_bin_samples", map.config.min_bin_samples}};
  root["provenance"] = {
      {"inputs", std::move(inputs)},
      {"seed", doc.provenance.seed ? json(*doc.provenance.seed) : json(nullptr)}};
  return root.dump(2) + "\n";
}

MapDocument map_from_json(std::string_view text) {
  MapDocument doc;
  try {
    const json root = json::parse(text);
    const int version = root.at("format_version").get<int>();
    if (version != kMapFormatVersion) {
      fail(ErrorKind::kParse, "unsupported map format_version " +
                                  std::to_string(version));
    }
    CalibrationMap& map = doc.map;
    map.method = parse_map_method(root.at("method").get<std::string>());
    map.num_classes = root.at("num_classes").get<std::size_t>();
    const json& binning = root.at("binning");
    map.spec.method =
        parse_bin_method(binning.at("method").get<std::string>());
    map.spec.edges = binning.at("edges").get<std::vector<double>>();
    if (!binning.at("high_conf_threshold").is_null()) {
      map.spec.high_conf_threshold =
          binning.at("high_conf_threshold").get<double>();
    }
    map.spec.requested_bins = binning.at("requested_bins").get<std::size_t>();
    map.temperatures = root.at("temperatures").get<std::vector<double>>();
    map.fallback_temperature = root.at("fallback_temperature").get<double>();
    map.per_bin_counts =
        root.at("per_bin_counts").get<std::vector<std::size_t>>();
    const json& fit = root.at("fit_config");
    map.config.fit.t_min = fit.at("t_min").get<double>();
    map.config.fit.t_max = fit.at("t_max").get<double>();
    map.config.fit.tolerance = fit.at("tolerance").get<double>();
    map.config.fit.max_iterations = fit.at("max_iterations").get<int>();
    map.config.min_bin_samples = fit.at("min_bin_samples").get<std::size_t>();
    const json& prov = root.at("provenance");
    for (const auto& input : prov.at("inputs")) {
      doc.provenance.inputs.push_back({input.at("role").get<std::string>(),
                                       input.at("path").get<std::string>(),
                                       input.at("sha256").get<std::string>()});
    }
    if (!prov.at("seed").is_null()) {
      doc.provenance.seed = prov.at("seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("malformed calibration map: ") + e.what());
  }
  try {
    doc.map.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kParse, std::string("invalid calibration map: ") + e.what());
  }
  return doc;
}

void save_map(const std::filesystem::path& path, const MapDocument& doc) {
  write_file(path, map_to_json(doc));
}

MapDocument load_map(const std::filesystem::path& path) {
  try {
    return map_from_json(read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void write_report_csv(std::ostream& out, const ReliabilityReport& report) {
  out << "lower,upper,count,accuracy,avg_confidence\n";
  for (const auto& bin : report.bins) {
    out << format_double(bin.lower) << ',' << format_double(bin.upper) << ','
        << bin.count << ',';
    if (bin.accuracy) out << format_double(*bin.accuracy);
    out << ',';
    if (bin.avg_confidence) out << format_double(*bin.avg_confidence);
    out << '\n';
  }
}

ReliabilityReport read_report_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || line != "lower,upper,count,accuracy,avg_confidence") {
    row_error(1, "expected header lower,upper,count,accuracy,avg_confidence");
  }
  ReliabilityReport report;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) row_error(line_no, "expected 5 fields");
    ReliabilityBin bin;
    bin.lower = parse_double(f[0]);
    bin.upper = parse_double(f[1]);
    bin.count = parse_index(f[2]);
    if (!f[3].empty()) bin.accuracy = parse_double(f[3]);
    if (!f[4].empty()) bin.avg_confidence = parse_double(f[4]);
    report.total_samples += bin.count;
    report.bins.push_back(bin);
  }
  return report;
}

void write_id_list(std::ostream& out, const std::vector<std::string>& ids) {
  for (const auto& id : ids) out << id << '\n';
}

std::vector<std::string> read_id_list(std::istream& in) {
  std::vector<std::string> ids;
  std::string line;
  while (next_line(in, line)) {
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

std::vector<std::string> read_id_list(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_id_list(in);
}

namespace {

/// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  // The single whitespace byte after maxval has been consumed here, which is
  // exactly what the format requires before the raster.
  if (token.empty()) fail(ErrorKind::kParse, "truncated PNM header");
  return token;
}

}  // namespace

RasterImage read_pnm(std::istream& in) {
  const std::string magic = pnm_token(in);
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    fail(ErrorKind::kParse, "not a binary PGM/PPM file (magic '" + magic + "')");
  }
  const auto width = static_cast<int>(parse_index(pnm_token(in)));
  const auto height = static_cast<int>(parse_index(pnm_token(in)));
  const auto maxval = parse_index(pnm_token(in));
  if (maxval != 255) {
    fail(ErrorKind::kParse, "only maxval 255 is supported");
  }
  if (width < 1 || height < 1) fail(ErrorKind::kParse, "empty PNM image");
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height *
                                   channels);
  in.read(reinterpret_cast<char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
    fail(ErrorKind::kParse, "truncated PNM raster");
  }
  return RasterImage(width, height, channels, std::move(pixels));
}

RasterImage read_pnm(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  try {
    return read_pnm(in);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void write_pnm(std::ostream& out, const RasterImage& img) {
  out << (img.channels() == 1 ? "P5" : "P6") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size()));
}

void write_pnm(const std::filesystem::path& path, const RasterImage& img) {
  std::ostringstream out(std::ios::binary);
  write_pnm(out, img);
  write_file(path, out.str());
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    fail(ErrorKind::kIo, "SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(ErrorKind::kIo, "write to '" + path.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::kIo, "cannot replace '" + path.string() + "'");
  }
}

}  // namespace bintemp::io
