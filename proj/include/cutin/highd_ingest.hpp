// Copyright 2026 The cutin-analysis Authors
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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutin/error.hpp"
#include "cutin/model.hpp"

namespace cutin {

/// Column names the reader looks for. Defaults follow the public highD
/// export; override any entry to read a corpus with different headers.
struct ColumnMap {
  // <NN>_tracks.csv
  std::string frame = "frame";
  std::string id = "id";
  std::string x = "x";
  std::string y = "y";
  std::string width = "width";    // box extent along x
  std::string height = "height";  // box extent along y
  std::string x_velocity = "xVelocity";
  std::string y_velocity = "yVelocity";
  std::string x_acceleration = "xAcceleration";
  std::string lane_id = "laneId";
  // <NN>_recordingMeta.csv
  std::string recording_id = "id";
  std::string frame_rate = "frameRate";
  std::string upper_markings = "upperLaneMarkings";
  std::string lower_markings = "lowerLaneMarkings";
  // <NN>_tracksMeta.csv (optional)
  std::string vehicle_class = "class";

  /// Sets one entry by its field name ("frame", "x_velocity", ...).
  /// Throws Error(config_invalid) for an unknown field.
  void set(std::string_view field, std::string column);
  std::vector<std::pair<std::string, std::string>> entries() const;

  friend bool operator==(const ColumnMap&, const ColumnMap&) = default;
};

struct RowRejection {
  std::string file;
  std::size_t line = 0;  ///< 1-based, header is line 1
  std::string reason;
};

struct FileFailure {
  std::string file;
  ErrorKind kind = ErrorKind::parse_error;
  std::string message;
};

struct IngestReport {
  std::size_t recordings_loaded = 0;
  std::size_t tracks_loaded = 0;
  std::size_t rows_rejected = 0;
  std::vector<RowRejection> rejections;
  std::vector<FileFailure> failed_files;
  std::vector<std::string> warnings;

  void merge(const IngestReport& other);
};

struct Violation {
  ErrorKind kind = ErrorKind::parse_error;
  VehicleId vehicle_id = 0;
  Frame frame = 0;
  std::string message;
};

/// Checks the structural invariants of a recording. Empty iff valid.
std::vector<Violation> validate_recording(const Recording& r);

/// Reads one recording. Kinematic rows with blank or non-numeric values are
/// dropped and listed in `report`; anything structural (missing column,
/// malformed row, frame gap, unknown lane) throws Error.
Recording load_recording(const std::filesystem::path& tracks_file,
                         const std::filesystem::path& meta_file,
                         const ColumnMap& columns = {}, IngestReport* report = nullptr,
                         const std::optional<std::filesystem::path>& tracks_meta_file = std::nullopt);

struct CorpusEntry {
  std::filesystem::path tracks;
  std::filesystem::path meta;
  std::optional<std::filesystem::path> tracks_meta;
};

/// Finds <prefix>_tracks.csv / <prefix>_recordingMeta.csv pairs, sorted by
/// file name. Tracks files without a meta partner are reported as failures.
std::vector<CorpusEntry> discover_corpus(const std::filesystem::path& directory, IngestReport& report);

/// Loads every recording pair in a directory. Per-file failures land in
/// the report and do not stop the batch. Output order is the file-name
/// order regardless of `workers`.
std::pair<std::vector<Recording>, IngestReport> load_corpus(const std::filesystem::path& directory,
                                                            const ColumnMap& columns = {},
                                                            unsigned workers = 1);

}  // namespace cutin
