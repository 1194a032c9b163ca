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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bintemp/augment.hpp"
#include "bintemp/calibration.hpp"
#include "bintemp/core.hpp"
#include "bintemp/metrics.hpp"

namespace bintemp::io {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

// Logits CSV: header "id,label,z0,...,z{C-1}" or "label,z0,...". The header
// decides whether the id column exists.
LogitDataset read_logits_csv(std::istream& in);
LogitDataset read_logits_csv(const std::filesystem::path& path);
void write_logits_csv(std::ostream& out, const LogitDataset& data);
void write_logits_csv(const std::filesystem::path& path,
                      const LogitDataset& data);

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
  bool operator==(const InputDigest&) const = default;
};

struct Provenance {
  std::vector<InputDigest> inputs;
  std::optional<std::uint64_t> seed;
  bool operator==(const Provenance&) const = default;
};

struct MapDocument {
  CalibrationMap map;
  Provenance provenance;
  bool operator==(const MapDocument&) const = default;
};

inline constexpr int kMapFormatVersion = 1;

std::string map_to_json(const MapDocument& doc);
MapDocument map_from_json(std::string_view text);
void save_map(const std::filesystem::path& path, const MapDocument& doc);
MapDocument load_map(const std::filesystem::path& path);

/// Columns lower,upper,count,accuracy,avg_confidence; empty-bin statistics
/// are written as empty fields.
void write_report_csv(std::ostream& out, const ReliabilityReport& report);
ReliabilityReport read_report_csv(std::istream& in);

/// One ID per line, LF-terminated.
void write_id_list(std::ostream& out, const std::vector<std::string>& ids);
std::vector<std::string> read_id_list(std::istream& in);
std::vector<std::string> read_id_list(const std::filesystem::path& path);

/// Binary PGM (P5) for one channel, PPM (P6) for three; maxval 255.
RasterImage read_pnm(std::istream& in);
RasterImage read_pnm(const std::filesystem::path& path);
void write_pnm(std::ostream& out, const RasterImage& img);
void write_pnm(const std::filesystem::path& path, const RasterImage& img);

/// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so a failed write never
/// leaves a truncated artifact behind.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace bintemp::io
