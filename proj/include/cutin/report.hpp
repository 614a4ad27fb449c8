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

// Table and audit file writers.
//
// CSV output is the machine format: full round-trip precision and group
// sizes. Markdown is the human format: "mean (std)" to three decimals and
// p-values below 0.001 printed as "<0.001".

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cutin/pipeline.hpp"

namespace cutin {

enum class TableFormat { csv, markdown };

std::string emit_table1(const ReportBundle& bundle, TableFormat format);
std::string emit_comparison_table(const ComparisonTable& table, TableFormat format);
std::string emit_events_csv(const ReportBundle& bundle);
std::string emit_drops_csv(const ReportBundle& bundle);
std::string emit_manifest(const Manifest& manifest);

/// "mean (std)" with three decimals.
std::string format_mean_std(const SampleSummary& s);
/// "<0.001" below 0.001, otherwise three decimals.
std::string format_p(double p);

struct OutputOptions {
  bool csv = true;
  bool markdown = true;
  bool events = true;     ///< events.csv, drops.csv and manifest.txt
};

/// Writes every file of the bundle into `dir` and returns the paths written.
/// Throws Error(io_error).
std::vector<std::filesystem::path> write_report(const ReportBundle& bundle, const std::filesystem::path& dir,
                                                const OutputOptions& options = {});

/// Reads an events.csv written by emit_events_csv back into a bundle with
/// events, thresholds and windows set. When `thresholds` is non-empty it
/// replaces the saved ones and labels are recomputed from the X-gap.
ReportBundle read_events_csv(const std::filesystem::path& file, const std::vector<double>& thresholds = {});

}  // namespace cutin
