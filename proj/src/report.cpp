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

#include "cutin/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "cutin/error.hpp"
#include "text_util.hpp"

namespace cutin {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEmptyCell = "\u2014";

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_row(const std::vector<std::string>& cells, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) s += sep;
    s += cells[i];
  }
  return s + "\n";
}

std::string md_row(const std::vector<std::string>& cells) {
  std::string s = "|";
  for (const auto& c : cells) s += " " + c + " |";
  return s + "\n";
}

std::string md_rule(std::size_t n) {
  std::string s = "|";
  for (std::size_t i = 0; i < n; ++i) s += i == 0 ? "---|" : "---:|";
  return s + "\n";
}

std::string metric_column(Role role, const WindowSpec& w, Metric m) {
  return std::string(to_string(role)) + "_" + w.key() + "_" + std::string(to_string(m));
}

}  // namespace

std::string format_mean_std(const SampleSummary& s) { return fixed3(s.mean) + " (" + fixed3(s.std) + ")"; }

std::string format_p(double p) { return p < 0.001 ? "<0.001" : fixed3(p); }

std::string emit_table1(const ReportBundle& b, TableFormat format) {
  const auto& t = b.table1;
  std::vector<std::string> header{"group"};
  for (const double th : t.thresholds) header.push_back(format_double(th));
  const bool empty = t.total == 0;
  const auto row = [&](const char* name, const std::vector<std::size_t>& counts) {
    std::vector<std::string> cells{name};
    for (const auto c : counts) cells.push_back(std::to_string(c));
    return cells;
  };
  if (format == TableFormat::csv) {
    std::string s = join_row(header);
    if (empty) return s;
    return s + join_row(row("Cut-in", t.cut_in)) + join_row(row("Other lane change", t.other));
  }
  header[0] = "X-gap (m)";
  std::string s = md_row(header) + md_rule(header.size());
  if (empty) return s;
  return s + md_row(row("Cut-in", t.cut_in)) + md_row(row("Other lane change", t.other));
}

std::string emit_comparison_table(const ComparisonTable& t, TableFormat format) {
  if (format == TableFormat::csv) {
    std::string s = join_row({"threshold", "window", "n_cut_in", "mean_cut_in", "std_cut_in", "n_other",
                              "mean_other", "std_other", "u", "rank_sum", "z", "p", "method", "status"});
    for (const auto& c : t.cells) {
      std::vector<std::string> cells{format_double(c.threshold), c.window.label()};
      if (c.result) {
        const auto& r = *c.result;
        cells.insert(cells.end(),
                     {std::to_string(r.cut_in.n), format_double(r.cut_in.mean), format_double(r.cut_in.std),
                      std::to_string(r.other.n), format_double(r.other.mean), format_double(r.other.std),
                      format_double(r.test.u_statistic), format_double(r.test.rank_sum),
                      format_double(r.test.z_value), format_double(r.test.p_two_sided),
                      std::string(to_string(r.test.method))});
      } else {
        cells.insert(cells.end(), 11, "");
      }
      cells.push_back(c.status);
      s += join_row(cells);
    }
    return s;
  }

  std::string s = "# " + t.title() + "\n\nMean and (std) per group.\n\n";
  s += md_row({"X-gap (m)", "Window", "Cut-in", "Other lane change", "p-value", "n"});
  s += md_rule(6);
  bool any_empty = false;
  for (const auto& c : t.cells) {
    if (c.result) {
      const auto& r = *c.result;
      s += md_row({format_double(c.threshold), c.window.label(), format_mean_std(r.cut_in),
                   format_mean_std(r.other), format_p(r.test.p_two_sided),
                   std::to_string(r.cut_in.n) + "/" + std::to_string(r.other.n)});
    } else {
      any_empty = true;
      s += md_row({format_double(c.threshold), c.window.label(), kEmptyCell, kEmptyCell, kEmptyCell, kEmptyCell});
    }
  }
  if (any_empty) s += std::string("\n") + kEmptyCell + " EmptySample: one of the two groups has no values.\n";
  return s;
}

std::string emit_events_csv(const ReportBundle& b) {
  std::vector<std::string> header{"recording_id", "lcv_id", "tfv_id", "origin_lane", "target_lane",
                                  "t1", "t2", "t3", "x_gap_at_t1"};
  for (const double th : b.thresholds) header.push_back("label_" + format_double(th));
  for (const Role role : {Role::lcv, Role::tfv}) {
    for (const auto& w : b.windows) {
      for (const Metric m : kAllMetrics) header.push_back(metric_column(role, w, m));
    }
  }
  std::string s = join_row(header);
  for (const auto& ev : b.events) {
    const auto& e = ev.event;
    std::vector<std::string> cells{std::to_string(e.recording_id),
                                   std::to_string(e.lcv_id),
                                   e.tfv_id ? std::to_string(*e.tfv_id) : "",
                                   std::to_string(e.origin_lane),
                                   std::to_string(e.target_lane),
                                   std::to_string(e.t1),
                                   std::to_string(e.t2),
                                   std::to_string(e.t3),
                                   e.x_gap_at_t1 ? format_double(*e.x_gap_at_t1) : ""};
    for (const auto l : ev.labels) cells.emplace_back(to_string(l));
    for (const Role role : {Role::lcv, Role::tfv}) {
      for (std::size_t w = 0; w < b.windows.size(); ++w) {
        for (const Metric m : kAllMetrics) {
          const auto v = ev.value(role, w, m);
          cells.push_back(v ? format_double(*v) : "");
        }
      }
    }
    s += join_row(cells);
  }
  return s;
}

std::string emit_drops_csv(const ReportBundle& b) {
  std::string s = join_row({"recording_id", "vehicle_id", "t2", "from_lane", "to_lane", "stage", "reason", "detail"});
  for (const auto& d : b.drops) {
    s += join_row({std::to_string(d.recording_id), std::to_string(d.vehicle_id), std::to_string(d.t2),
                   std::to_string(d.from_lane), std::to_string(d.to_lane), d.stage, d.reason, csv_field(d.detail)});
  }
  return s;
}

std::string emit_manifest(const Manifest& m) {
  std::string s = "# cutin run manifest; usable as --config to reproduce this run\n";
  s += "# config_hash " + detail::hex64(m.config_hash) + "\n";
  for (const auto& [name, sum] : m.input_checksums) s += "# input " + name + " " + detail::hex64(sum) + "\n";
  return s + m.config_text;
}

std::vector<fs::path> write_report(const ReportBundle& b, const fs::path& dir, const OutputOptions& o) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  const auto put = [&](const std::string& name, const std::string& content) {
    written.push_back(dir / name);
    detail::write_file(written.back(), content);
  };
  if (o.csv) put("table1.csv", emit_table1(b, TableFormat::csv));
  if (o.markdown) put("table1.md", emit_table1(b, TableFormat::markdown));
  for (const auto& t : b.tables) {
    if (o.csv) put(t.file_stem() + ".csv", emit_comparison_table(t, TableFormat::csv));
    if (o.markdown) put(t.file_stem() + ".md", emit_comparison_table(t, TableFormat::markdown));
  }
  if (o.events) {
    put("events.csv", emit_events_csv(b));
    put("drops.csv", emit_drops_csv(b));
    std::string audit = "# audit transitions " + std::to_string(b.audit.transitions) + " kept " +
                        std::to_string(b.audit.kept);
    for (const auto& [reason, n] : b.audit.by_reason) audit += " " + reason + " " + std::to_string(n);
    put("manifest.txt", emit_manifest(b.manifest) + audit + "\n");
  }
  return written;
}

ReportBundle read_events_csv(const fs::path& file, const std::vector<double>& thresholds) {
  const std::string text = detail::read_file(file);
  const auto rows = detail::lines(text);
  if (rows.empty()) throw Error(ErrorKind::parse_error, file.string() + ": missing header");
  const auto header = detail::split(rows[0], ',');
  static constexpr const char* kFixed[] = {"recording_id", "lcv_id", "tfv_id", "origin_lane", "target_lane",
                                           "t1", "t2", "t3", "x_gap_at_t1"};
  for (std::size_t i = 0; i < std::size(kFixed); ++i) {
    if (i >= header.size() || header[i] != kFixed[i]) {
      throw Error(ErrorKind::missing_column, file.string() + ": expected column '" + kFixed[i] + "'");
    }
  }

  ReportBundle b;
  struct MetricCol {
    std::size_t col;
    Role role;
    std::size_t window;
    Metric metric;
  };
  std::vector<MetricCol> metric_cols;
  std::vector<double> saved;
  for (std::size_t c = std::size(kFixed); c < header.size(); ++c) {
    const auto h = header[c];
    if (h.substr(0, 6) == "label_") {
      const auto th = detail::parse_double(h.substr(6));
      if (!th) throw Error(ErrorKind::parse_error, "bad label column '" + std::string(h) + "'");
      saved.push_back(*th);
      continue;
    }
    const auto us = h.find('_');
    const auto role_name = h.substr(0, us);
    if (us == std::string_view::npos || (role_name != "lcv" && role_name != "tfv")) {
      throw Error(ErrorKind::parse_error, "unrecognized column '" + std::string(h) + "'");
    }
    const auto rest = h.substr(us + 1);
    std::optional<Metric> metric;
    std::string_view window_key;
    for (const Metric m : kAllMetrics) {
      const std::string suffix = "_" + std::string(to_string(m));
      if (rest.size() > suffix.size() && rest.substr(rest.size() - suffix.size()) == suffix) {
        metric = m;
        window_key = rest.substr(0, rest.size() - suffix.size());
      }
    }
    if (!metric) throw Error(ErrorKind::parse_error, "unrecognized column '" + std::string(h) + "'");
    const auto w = WindowSpec::from_key(window_key);
    auto it = std::find(b.windows.begin(), b.windows.end(), w);
    if (it == b.windows.end()) it = b.windows.insert(b.windows.end(), w);
    metric_cols.push_back({c, role_name == "lcv" ? Role::lcv : Role::tfv,
                           static_cast<std::size_t>(it - b.windows.begin()), *metric});
  }
  b.thresholds = thresholds.empty() ? saved : thresholds;

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = detail::split(rows[i], ',');
    const auto where = [&] { return file.string() + ":" + std::to_string(i + 1); };
    if (cells.size() != header.size()) throw Error(ErrorKind::parse_error, where() + ": wrong field count");
    const auto integer = [&](std::size_t c) {
      const auto v = detail::parse_int(cells[c]);
      if (!v) throw Error(ErrorKind::parse_error, where() + ": bad integer '" + std::string(cells[c]) + "'");
      return *v;
    };
    EventRecord ev;
    auto& e = ev.event;
    e.recording_id = static_cast<int>(integer(0));
    e.lcv_id = integer(1);
    if (!cells[2].empty()) e.tfv_id = integer(2);
    e.origin_lane = static_cast<LaneId>(integer(3));
    e.target_lane = static_cast<LaneId>(integer(4));
    e.t1 = integer(5);
    e.t2 = integer(6);
    e.t3 = integer(7);
    if (!cells[8].empty()) {
      const auto g = detail::parse_double(cells[8]);
      if (!g) throw Error(ErrorKind::parse_error, where() + ": bad x_gap_at_t1");
      e.x_gap_at_t1 = *g;
    }
    for (auto& slot : ev.values) slot.resize(b.windows.size());
    for (const auto& mc : metric_cols) {
      if (cells[mc.col].empty()) continue;
      const auto v = detail::parse_double(cells[mc.col]);
      if (!v) throw Error(ErrorKind::parse_error, where() + ": bad metric value");
      ev.values[static_cast<std::size_t>(mc.role)][mc.window][static_cast<std::size_t>(mc.metric)] = *v;
    }
    b.events.push_back(std::move(ev));
  }
  b.audit.kept = b.events.size();
  build_statistics(b);
  return b;
}

}  // namespace cutin
