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

// cutin: lane-change extraction, cut-in classification and group statistics.
//
// Exit codes: 0 success, 1 config error, 2 ingestion error, 3 no events.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cutin/error.hpp"
#include "cutin/highd_ingest.hpp"
#include "cutin/pipeline.hpp"
#include "cutin/report.hpp"
#include "cutin/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kIngestError = 2;
constexpr int kNoEvents = 3;

int exit_code_for(const cutin::Error& e) {
  return e.kind() == cutin::ErrorKind::config_invalid ? kConfigError : kIngestError;
}

void apply_formats(const std::string& formats, cutin::PipelineConfig& cfg) {
  cfg = cutin::parse_config("formats = " + formats, cfg);
}

void apply_gaps(const std::string& gaps, cutin::PipelineConfig& cfg) {
  cfg = cutin::parse_config("gap_thresholds = " + gaps, cfg);
}

void print_summary(const cutin::ReportBundle& b, std::size_t files) {
  std::printf("%zu lane changes, %zu kept, %zu dropped\n", b.audit.transitions, b.audit.kept, b.audit.dropped());
  for (const auto& [reason, n] : b.audit.by_reason) std::printf("  %-20s %zu\n", reason.c_str(), n);
  std::fputs(cutin::emit_table1(b, cutin::TableFormat::markdown).c_str(), stdout);
  std::printf("%zu files written\n", files);
}

void print_ingest(const cutin::IngestReport& r) {
  std::printf("recordings %zu, tracks %zu, rows rejected %zu, failed files %zu\n", r.recordings_loaded,
              r.tracks_loaded, r.rows_rejected, r.failed_files.size());
  for (const auto& f : r.failed_files) {
    std::fprintf(stderr, "failed: %s: %s: %s\n", f.file.c_str(), std::string(cutin::to_string(f.kind)).c_str(),
                 f.message.c_str());
  }
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lane-change extraction, cut-in classification and group statistics"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline and write all tables");
  std::string config_file, input_dir, out_dir, gaps, gap_mode, formats;
  unsigned workers = 0;
  bool synthetic = false;
  std::size_t small_gap = 20, large_gap = 20;
  std::uint64_t seed = 1;
  run->add_option("--config", config_file, "Flat key = value config file")->check(CLI::ExistingFile);
  run->add_option("--input", input_dir, "Directory of <NN>_tracks.csv / <NN>_recordingMeta.csv files");
  run->add_flag("--synthetic", synthetic, "Use a generated corpus instead of --input");
  run->add_option("--small", small_gap, "Synthetic scenarios with a small gap at T1");
  run->add_option("--large", large_gap, "Synthetic scenarios with a large gap at T1");
  run->add_option("--seed", seed, "Synthetic corpus seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--gaps", gaps, "Comma-separated gap thresholds in m");
  run->add_option("--gap-mode", gap_mode, "net_gap or center_distance");
  run->add_option("--format", formats, "Comma-separated subset of csv,markdown");
  run->add_option("--workers", workers, "Worker threads, 0 = auto");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a generated corpus as highD-style CSV files");
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--small", small_gap, "Scenarios with a small gap at T1");
  synth->add_option("--large", large_gap, "Scenarios with a large gap at T1");
  synth->add_option("--seed", seed, "Corpus seed");

  // validate
  auto* validate = app.add_subcommand("validate", "Load a corpus and report ingestion problems");
  std::string validate_input, validate_config;
  validate->add_option("--input", validate_input, "Corpus directory")->required();
  validate->add_option("--config", validate_config, "Config file with column.<field> overrides")
      ->check(CLI::ExistingFile);
  validate->add_option("--workers", workers, "Worker threads, 0 = auto");

  // stats
  auto* stats = app.add_subcommand("stats", "Recompute tables from a saved events.csv");
  std::string events_file, stats_out, stats_gaps, stats_formats;
  stats->add_option("--events", events_file, "events.csv from a previous run")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out, "Output directory")->required();
  stats->add_option("--gaps", stats_gaps, "Replacement gap thresholds in m");
  stats->add_option("--format", stats_formats, "Comma-separated subset of csv,markdown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      cutin::PipelineConfig cfg;
      if (!config_file.empty()) cfg = cutin::load_config(config_file);
      if (!input_dir.empty()) {
        cfg.input_dir = input_dir;
        cfg.synthetic.reset();
      }
      if (synthetic) {
        cfg.synthetic = cutin::SyntheticCorpusSpec{small_gap, large_gap, seed};
        cfg.input_dir.reset();
      }
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (!gaps.empty()) apply_gaps(gaps, cfg);
      if (!gap_mode.empty()) cfg = cutin::parse_config("gap_mode = " + gap_mode, cfg);
      if (!formats.empty()) apply_formats(formats, cfg);
      if (run->count("--workers") > 0) cfg.workers = workers;

      const auto bundle = cutin::run_pipeline(cfg);
      if (cfg.input_dir) print_ingest(bundle.ingest);
      const auto files = cutin::write_report(bundle, cfg.output_dir, {cfg.write_csv, cfg.write_markdown, true});
      print_summary(bundle, files.size());
      return bundle.events.empty() ? kNoEvents : kOk;
    }

    if (*synth) {
      const auto corpus = cutin::make_synthetic_corpus({small_gap, large_gap, seed});
      std::string truth = "recording_id,lcv_id,tfv_id,t1,t2,t3,x_gap_at_t1,center_gap_at_t1\n";
      for (const auto& s : corpus) {
        cutin::write_highd_files(s.recording, synth_out);
        const auto& m = s.truth.first();
        truth += std::to_string(s.recording.recording_id) + "," + std::to_string(cutin::kLcvId) + "," +
                 std::to_string(cutin::kTfvId) + "," + std::to_string(m.t1.value_or(-1)) + "," +
                 std::to_string(m.t2) + "," + std::to_string(m.t3.value_or(-1)) + "," +
                 cutin::format_double(s.truth.x_gap_at_t1) + "," + cutin::format_double(s.truth.center_gap_at_t1) +
                 "\n";
      }
      std::FILE* f = std::fopen((std::filesystem::path(synth_out) / "truth.csv").c_str(), "wb");
      if (f == nullptr) throw cutin::Error(cutin::ErrorKind::io_error, "cannot write truth.csv");
      std::fwrite(truth.data(), 1, truth.size(), f);
      std::fclose(f);
      std::printf("%zu recordings written to %s\n", corpus.size(), synth_out.c_str());
      return kOk;
    }

    if (*validate) {
      cutin::PipelineConfig cfg;
      if (!validate_config.empty()) cfg = cutin::load_config(validate_config);
      const auto [recordings, report] = cutin::load_corpus(validate_input, cfg.columns, workers);
      print_ingest(report);
      std::size_t violations = 0;
      for (const auto& r : recordings) {
        for (const auto& v : cutin::validate_recording(r)) {
          ++violations;
          std::fprintf(stderr, "recording %d: %s\n", r.recording_id, v.message.c_str());
        }
      }
      return report.failed_files.empty() && violations == 0 ? kOk : kIngestError;
    }

    if (*stats) {
      cutin::PipelineConfig fmt;
      if (!stats_formats.empty()) apply_formats(stats_formats, fmt);
      std::vector<double> thresholds;
      if (!stats_gaps.empty()) {
        apply_gaps(stats_gaps, fmt);
        fmt.params.validate();
        thresholds = fmt.params.gap_thresholds;
      }
      const auto bundle = cutin::read_events_csv(events_file, thresholds);
      const auto files = cutin::write_report(bundle, stats_out, {fmt.write_csv, fmt.write_markdown, false});
      print_summary(bundle, files.size());
      return bundle.events.empty() ? kNoEvents : kOk;
    }
  } catch (const cutin::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIngestError;
  }
  return kOk;
}
