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

#include "cutin/pipeline.hpp"

#include <algorithm>
#include <functional>

#include "cutin/error.hpp"
#include "cutin/metrics.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace cutin {

namespace fs = std::filesystem;

// --- configuration ----------------------------------------------------------

void PipelineConfig::validate() const {
  if (input_dir.has_value() == synthetic.has_value()) {
    throw Error(ErrorKind::config_invalid, "exactly one of input and synthetic_* must be set");
  }
  if (windows.empty()) throw Error(ErrorKind::config_invalid, "window list is empty");
  for (const auto& w : windows) {
    if (!(w.start_offset < w.end_offset)) {
      throw Error(ErrorKind::config_invalid, "window " + w.label() + " must have start < end");
    }
  }
  if (!write_csv && !write_markdown) throw Error(ErrorKind::config_invalid, "no output format selected");
  params.validate();
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::config_invalid,
              "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  const auto v = detail::parse_double(value);
  if (!v) bad_value(key, value);
  return *v;
}

std::uint64_t to_count(std::string_view key, std::string_view value) {
  const auto v = detail::parse_int(value);
  if (!v || *v < 0) bad_value(key, value);
  return static_cast<std::uint64_t>(*v);
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const auto part : detail::split(value, ',')) out.push_back(to_double(key, detail::trim(part)));
  return out;
}

SyntheticCorpusSpec& synthetic_of(PipelineConfig& cfg) {
  if (!cfg.synthetic) cfg.synthetic = SyntheticCorpusSpec{};
  return *cfg.synthetic;
}

void apply_formats(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  cfg.write_csv = false;
  cfg.write_markdown = false;
  for (const auto part : detail::split(value, ',')) {
    const auto f = detail::trim(part);
    if (f == "csv") cfg.write_csv = true;
    else if (f == "markdown" || f == "md") cfg.write_markdown = true;
    else bad_value(key, value);
  }
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

PipelineConfig parse_config(std::string_view text, PipelineConfig cfg) {
  std::size_t line_no = 0;
  for (auto line : detail::lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::config_invalid, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    auto& p = cfg.params;
    if (key == "input") cfg.input_dir = fs::path(std::string(value));
    else if (key == "synthetic_small_gap") synthetic_of(cfg).small_gap = to_count(key, value);
    else if (key == "synthetic_large_gap") synthetic_of(cfg).large_gap = to_count(key, value);
    else if (key == "synthetic_seed") synthetic_of(cfg).seed = to_count(key, value);
    else if (key == "v_s") p.v_s = to_double(key, value);
    else if (key == "tau_s") p.tau_s = to_double(key, value);
    else if (key == "v_e") p.v_e = to_double(key, value);
    else if (key == "tau_e") p.tau_e = to_double(key, value);
    else if (key == "min_speed") p.min_speed = to_double(key, value);
    else if (key == "monotonic_slack") p.monotonic_slack = to_double(key, value);
    else if (key == "gap_thresholds") p.gap_thresholds = to_list(key, value);
    else if (key == "gap_mode") p.gap_mode = gap_mode_from_string(value);
    else if (key == "windows") {
      cfg.windows.clear();
      for (const auto part : detail::split(value, ',')) cfg.windows.push_back(WindowSpec::from_key(part));
    } else if (key == "output") cfg.output_dir = fs::path(std::string(value));
    else if (key == "formats") apply_formats(cfg, key, value);
    else if (key == "workers") cfg.workers = value == "auto" ? 0u : static_cast<unsigned>(to_count(key, value));
    else if (key.substr(0, 7) == "column.") cfg.columns.set(key.substr(7), std::string(value));
    else {
      throw Error(ErrorKind::config_invalid,
                  "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

PipelineConfig load_config(const fs::path& file, PipelineConfig base) {
  std::string text;
  try {
    text = detail::read_file(file);
  } catch (const Error& e) {
    throw Error(ErrorKind::config_invalid, "cannot read config " + file.string());
  }
  return parse_config(text, std::move(base));
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::string s;
  const auto put = [&](std::string_view k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
  if (cfg.input_dir) put("input", cfg.input_dir->string());
  if (cfg.synthetic) {
    put("synthetic_small_gap", std::to_string(cfg.synthetic->small_gap));
    put("synthetic_large_gap", std::to_string(cfg.synthetic->large_gap));
    put("synthetic_seed", std::to_string(cfg.synthetic->seed));
  }
  const auto& p = cfg.params;
  put("v_s", format_double(p.v_s));
  put("tau_s", format_double(p.tau_s));
  put("v_e", format_double(p.v_e));
  put("tau_e", format_double(p.tau_e));
  put("min_speed", format_double(p.min_speed));
  put("monotonic_slack", format_double(p.monotonic_slack));
  put("gap_thresholds", join_doubles(p.gap_thresholds));
  put("gap_mode", std::string(to_string(p.gap_mode)));
  std::string windows;
  for (std::size_t i = 0; i < cfg.windows.size(); ++i) windows += (i ? "," : "") + cfg.windows[i].key();
  put("windows", windows);
  for (const auto& [field, column] : cfg.columns.entries()) put("column." + field, column);
  return s;
}

std::uint64_t config_hash(const PipelineConfig& cfg) { return detail::fnv1a(config_to_text(cfg)); }

// --- bundle pieces ----------------------------------------------------------

std::optional<double> EventRecord::value(Role role, std::size_t window, Metric m) const {
  return values[static_cast<std::size_t>(role)].at(window)[static_cast<std::size_t>(m)];
}

std::size_t DropAudit::dropped() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : by_reason) n += count;
  return n;
}

std::string ComparisonTable::file_stem() const {
  std::string anchor_name(to_string(anchor));
  std::transform(anchor_name.begin(), anchor_name.end(), anchor_name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return "table_" + std::string(to_string(role)) + "_" + anchor_name + "_" + std::string(to_string(metric));
}

std::string ComparisonTable::title() const {
  std::string who = role == Role::lcv ? "LCV" : "TFV";
  std::string t = who + " " + std::string(describe(metric)) + " around " + std::string(to_string(anchor));
  if (published) t += " (published table " + *published + ")";
  return t;
}

std::optional<std::string> published_table(Role role, Anchor anchor, Metric m) {
  struct Tag {
    Role role;
    Anchor anchor;
    Metric metric;
    const char* number;
  };
  static constexpr Tag kTags[] = {
      {Role::lcv, Anchor::t1, Metric::dv, "II"},    {Role::lcv, Anchor::t1, Metric::r_v, "III"},
      {Role::lcv, Anchor::t2, Metric::p_a, "IV"},   {Role::lcv, Anchor::t2, Metric::a_max, "V"},
      {Role::tfv, Anchor::t1, Metric::a_min, "VI"}, {Role::tfv, Anchor::t2, Metric::dv, "VII"},
  };
  for (const auto& t : kTags) {
    if (t.role == role && t.anchor == anchor && t.metric == m) return std::string(t.number);
  }
  return std::nullopt;
}

EventRecord measure_event(const Recording& r, const LaneChangeEvent& e, std::span<const WindowSpec> windows) {
  using MetricFn = double (*)(const WindowSeries&);
  static constexpr MetricFn kFns[] = {acceleration_percentage, velocity_change_ratio, cumulative_velocity_change,
                                      max_acceleration, min_deceleration};
  EventRecord rec;
  rec.event = e;
  for (const Role role : {Role::lcv, Role::tfv}) {
    auto& slot = rec.values[static_cast<std::size_t>(role)];
    slot.resize(windows.size());
    if (role == Role::tfv && !e.tfv_id) continue;
    const auto& track = r.track(role == Role::lcv ? e.lcv_id : *e.tfv_id);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      WindowSeries series;
      try {
        series = slice_window(track, e.anchor(windows[w].anchor), windows[w], r.dt);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t m = 0; m < 5; ++m) {
        try {
          slot[w][m] = kFns[m](series);
        } catch (const Error&) {
        }
      }
    }
  }
  return rec;
}

void build_statistics(ReportBundle& b) {
  for (auto& ev : b.events) ev.labels = classify(ev.event, b.thresholds).labels;

  b.table1 = {};
  b.table1.thresholds = b.thresholds;
  b.table1.total = b.events.size();
  for (std::size_t k = 0; k < b.thresholds.size(); ++k) {
    std::size_t cut = 0;
    for (const auto& ev : b.events) cut += ev.labels[k] == Label::cut_in ? 1 : 0;
    b.table1.cut_in.push_back(cut);
    b.table1.other.push_back(b.events.size() - cut);
  }

  b.tables.clear();
  for (const Role role : {Role::lcv, Role::tfv}) {
    for (const Anchor anchor : {Anchor::t1, Anchor::t2}) {
      std::vector<std::size_t> idx;
      for (std::size_t w = 0; w < b.windows.size(); ++w) {
        if (b.windows[w].anchor == anchor) idx.push_back(w);
      }
      if (idx.empty()) continue;
      for (const Metric metric : kAllMetrics) {
        ComparisonTable t;
        t.role = role;
        t.anchor = anchor;
        t.metric = metric;
        t.published = published_table(role, anchor, metric);
        for (const auto w : idx) t.windows.push_back(b.windows[w]);
        for (std::size_t k = 0; k < b.thresholds.size(); ++k) {
          for (const auto w : idx) {
            ComparisonCell cell;
            cell.threshold = b.thresholds[k];
            cell.window = b.windows[w];
            std::vector<double> cut, other;
            for (const auto& ev : b.events) {
              if (const auto v = ev.value(role, w, metric)) {
                (ev.labels[k] == Label::cut_in ? cut : other).push_back(*v);
              }
            }
            try {
              cell.result = compare_groups(cut, other);
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::empty_sample) throw;
              cell.status = "EmptySample";
              cell.detail = e.what();
            }
            t.cells.push_back(std::move(cell));
          }
        }
        b.tables.push_back(std::move(t));
      }
    }
  }
}

// --- orchestration ----------------------------------------------------------

namespace {

struct RecordingOutcome {
  std::vector<LaneChangeEvent> kept;
  std::vector<DropRecord> drops;
  std::size_t transitions = 0;
};

RecordingOutcome process_recording(const Recording& r, const PipelineConfig& cfg) {
  RecordingOutcome out;
  auto detected = extract_events(r, cfg.params);
  out.transitions = detected.transitions;
  for (const auto& d : detected.drops) {
    out.drops.push_back({d.recording_id, d.transition.vehicle_id, d.transition.t2, d.transition.from_lane,
                         d.transition.to_lane, "detection", std::string(to_string(d.reason)), ""});
  }
  auto filtered = attach_and_filter(detected.events, r, cfg.params, cfg.windows);
  for (const auto& x : filtered.dropped) {
    out.drops.push_back({x.event.recording_id, x.event.lcv_id, x.event.t2, x.event.origin_lane,
                         x.event.target_lane, "filter", std::string(to_string(x.code)), x.detail});
  }
  std::sort(out.drops.begin(), out.drops.end(), [](const DropRecord& a, const DropRecord& b) {
    return std::tie(a.vehicle_id, a.t2) < std::tie(b.vehicle_id, b.t2);
  });
  out.kept = std::move(filtered.kept);
  return out;
}

}  // namespace

ReportBundle run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const unsigned workers = detail::resolve_workers(cfg.workers);

  ReportBundle b;
  b.thresholds = cfg.params.gap_thresholds;
  b.windows = cfg.windows;
  b.manifest.config_text = config_to_text(cfg);
  b.manifest.config_hash = config_hash(cfg);

  std::vector<Recording> recordings;
  if (cfg.input_dir) {
    IngestReport scan;
    for (const auto& e : discover_corpus(*cfg.input_dir, scan)) {
      for (const auto& f : {std::optional<fs::path>(e.tracks), std::optional<fs::path>(e.meta), e.tracks_meta}) {
        if (f) b.manifest.input_checksums.emplace_back(f->filename().string(), detail::fnv1a(detail::read_file(*f)));
      }
    }
    auto [recs, report] = load_corpus(*cfg.input_dir, cfg.columns, workers);
    if (recs.empty() && !report.failed_files.empty()) {
      const auto& f = report.failed_files.front();
      throw Error(f.kind, f.file + ": " + f.message);
    }
    recordings = std::move(recs);
    b.ingest = std::move(report);
  } else {
    for (auto& s : make_synthetic_corpus(*cfg.synthetic, cfg.params)) recordings.push_back(std::move(s.recording));
    for (const auto& r : recordings) {
      b.manifest.input_checksums.emplace_back("synthetic:" + std::to_string(r.recording_id),
                                              detail::fnv1a(serialize_recording(r)));
    }
    b.ingest.recordings_loaded = recordings.size();
  }

  std::vector<RecordingOutcome> outcomes(recordings.size());
  detail::parallel_for(recordings.size(), workers,
                       [&](std::size_t i) { outcomes[i] = process_recording(recordings[i], cfg); });

  // Flatten in recording order, then measure every kept event.
  std::vector<std::pair<std::size_t, LaneChangeEvent>> kept;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    b.audit.transitions += outcomes[i].transitions;
    for (auto& d : outcomes[i].drops) {
      ++b.audit.by_reason[d.reason];
      b.drops.push_back(std::move(d));
    }
    for (auto& e : outcomes[i].kept) kept.emplace_back(i, std::move(e));
  }
  b.audit.kept = kept.size();
  b.events.resize(kept.size());
  detail::parallel_for(kept.size(), workers, [&](std::size_t j) {
    b.events[j] = measure_event(recordings[kept[j].first], kept[j].second, cfg.windows);
  });

  build_statistics(b);
  return b;
}

}  // namespace cutin
