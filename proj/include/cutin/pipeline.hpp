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

// End-to-end orchestration: corpus -> events -> labels -> metrics -> tests.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cutin/classification.hpp"
#include "cutin/detection.hpp"
#include "cutin/highd_ingest.hpp"
#include "cutin/model.hpp"
#include "cutin/rank_stats.hpp"
#include "cutin/synth.hpp"

namespace cutin {

struct PipelineConfig {
  std::optional<std::filesystem::path> input_dir;
  std::optional<SyntheticCorpusSpec> synthetic;
  DetectionParams params;
  std::vector<WindowSpec> windows = default_windows();
  ColumnMap columns;
  std::filesystem::path output_dir = "cutin_out";
  bool write_csv = true;
  bool write_markdown = true;
  unsigned workers = 0;  ///< 0 picks the hardware concurrency

  /// Throws Error(config_invalid) unless exactly one input source is set,
  /// the window list is non-empty and the parameters are valid.
  void validate() const;
};

/// Parses the flat `key = value` format; `#` starts a comment. Unknown keys
/// and malformed values throw Error(config_invalid). Keys absent from the
/// text keep the values already in `base`.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& file, PipelineConfig base = {});

/// Every setting that affects the results, in parse_config syntax. Output
/// location, formats and worker count are left out.
std::string config_to_text(const PipelineConfig& cfg);

std::uint64_t config_hash(const PipelineConfig& cfg);

/// One kept event with its labels and per-window metric values.
struct EventRecord {
  LaneChangeEvent event;
  std::vector<Label> labels;  ///< parallel to the bundle's thresholds
  /// values[role][window][metric]; empty optional when the metric is
  /// undefined on that window (for instance r_v with a zero minimum speed).
  std::array<std::vector<std::array<std::optional<double>, 5>>, 2> values;

  std::optional<double> value(Role role, std::size_t window, Metric m) const;
};

struct DropRecord {
  int recording_id = 0;
  VehicleId vehicle_id = 0;
  Frame t2 = 0;
  LaneId from_lane = 0;
  LaneId to_lane = 0;
  std::string stage;   ///< "detection" or "filter"
  std::string reason;  ///< DetectionDropReason or ExclusionCode name
  std::string detail;
};

struct DropAudit {
  std::size_t transitions = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> by_reason;

  std::size_t dropped() const;
};

struct Table1 {
  std::vector<double> thresholds;
  std::vector<std::size_t> cut_in;
  std::vector<std::size_t> other;
  std::size_t total = 0;
};

struct ComparisonCell {
  double threshold = 0.0;
  WindowSpec window;
  std::optional<GroupComparison> result;  ///< empty when a group has no values
  std::string status = "ok";              ///< "ok" or "EmptySample"
  std::string detail;
};

struct ComparisonTable {
  Role role = Role::lcv;
  Anchor anchor = Anchor::t1;
  Metric metric = Metric::dv;
  std::optional<std::string> published;  ///< roman table number of a published counterpart
  std::vector<WindowSpec> windows;       ///< the configured windows with this anchor
  std::vector<ComparisonCell> cells;     ///< threshold-major, then window

  std::string file_stem() const;  ///< table_<role>_<anchor>_<metric>
  std::string title() const;
};

struct Manifest {
  std::string config_text;
  std::uint64_t config_hash = 0;
  std::vector<std::pair<std::string, std::uint64_t>> input_checksums;
};

struct ReportBundle {
  std::vector<double> thresholds;
  std::vector<WindowSpec> windows;
  Table1 table1;
  std::vector<ComparisonTable> tables;  ///< role x anchor x metric, 20 with all windows present
  std::vector<EventRecord> events;
  std::vector<DropRecord> drops;
  DropAudit audit;
  Manifest manifest;
  IngestReport ingest;
};

/// Published counterpart of a (role, anchor, metric) grid, if any.
std::optional<std::string> published_table(Role role, Anchor anchor, Metric m);

/// Computes labels, Table I and every comparison grid from kept events.
/// Shared by run_pipeline and the `stats` command.
void build_statistics(ReportBundle& bundle);

/// Loads or synthesizes the corpus and runs every stage. Deterministic and
/// independent of cfg.workers. Ingestion errors that leave no recording
/// propagate as Error.
ReportBundle run_pipeline(const PipelineConfig& cfg);

/// Event metrics for one recording's kept events.
EventRecord measure_event(const Recording& r, const LaneChangeEvent& e, std::span<const WindowSpec> windows);

}  // namespace cutin
