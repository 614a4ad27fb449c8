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

#include "cutin/highd_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "parallel.hpp"
#include "text_util.hpp"

namespace cutin {

namespace fs = std::filesystem;

void ColumnMap::set(std::string_view field, std::string column) {
  std::string* slot = nullptr;
  if (field == "frame") slot = &frame;
  else if (field == "id") slot = &id;
  else if (field == "x") slot = &x;
  else if (field == "y") slot = &y;
  else if (field == "width") slot = &width;
  else if (field == "height") slot = &height;
  else if (field == "x_velocity") slot = &x_velocity;
  else if (field == "y_velocity") slot = &y_velocity;
  else if (field == "x_acceleration") slot = &x_acceleration;
  else if (field == "lane_id") slot = &lane_id;
  else if (field == "recording_id") slot = &recording_id;
  else if (field == "frame_rate") slot = &frame_rate;
  else if (field == "upper_markings") slot = &upper_markings;
  else if (field == "lower_markings") slot = &lower_markings;
  else if (field == "vehicle_class") slot = &vehicle_class;
  if (slot == nullptr) {
    throw Error(ErrorKind::config_invalid, "unknown column field '" + std::string(field) + "'");
  }
  *slot = std::move(column);
}

std::vector<std::pair<std::string, std::string>> ColumnMap::entries() const {
  return {{"frame", frame},
          {"id", id},
          {"x", x},
          {"y", y},
          {"width", width},
          {"height", height},
          {"x_velocity", x_velocity},
          {"y_velocity", y_velocity},
          {"x_acceleration", x_acceleration},
          {"lane_id", lane_id},
          {"recording_id", recording_id},
          {"frame_rate", frame_rate},
          {"upper_markings", upper_markings},
          {"lower_markings", lower_markings},
          {"vehicle_class", vehicle_class}};
}

void IngestReport::merge(const IngestReport& other) {
  recordings_loaded += other.recordings_loaded;
  tracks_loaded += other.tracks_loaded;
  rows_rejected += other.rows_rejected;
  rejections.insert(rejections.end(), other.rejections.begin(), other.rejections.end());
  failed_files.insert(failed_files.end(), other.failed_files.begin(), other.failed_files.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::vector<Violation> validate_recording(const Recording& r) {
  std::vector<Violation> out;
  if (!(r.dt > 0.0)) out.push_back({ErrorKind::parse_error, 0, 0, "dt must be positive"});
  for (const auto* markings : {&r.layout.upper_markings, &r.layout.lower_markings}) {
    for (std::size_t i = 1; i < markings->size(); ++i) {
      if (!((*markings)[i] - (*markings)[i - 1] > 1.0)) {
        out.push_back({ErrorKind::parse_error, 0, 0,
                       "lane markings must increase by more than 1 m between adjacent lanes"});
        break;
      }
    }
  }
  if (r.tracks.empty()) out.push_back({ErrorKind::empty_recording, 0, 0, "recording has no tracks"});
  for (const auto& [id, t] : r.tracks) {
    if (t.states.empty()) {
      out.push_back({ErrorKind::empty_recording, id, 0, "track has no states"});
      continue;
    }
    if (!(t.length > 0.0) || !(t.width > 0.0)) {
      out.push_back({ErrorKind::parse_error, id, t.first_frame(), "non-positive vehicle dimensions"});
    }
    std::optional<int> direction;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      const auto& s = t.states[i];
      if (i > 0 && s.frame != t.states[i - 1].frame + 1) {
        out.push_back({ErrorKind::non_contiguous_frames, id, s.frame,
                       "frame " + std::to_string(t.states[i - 1].frame) + " is followed by " +
                           std::to_string(s.frame)});
      }
      const auto lane = r.lanes.find(s.lane_id);
      if (lane == r.lanes.end()) {
        out.push_back({ErrorKind::unknown_lane_id, id, s.frame,
                       "lane " + std::to_string(s.lane_id) + " is not declared"});
        continue;
      }
      if (direction && *direction != lane->second.direction) {
        out.push_back({ErrorKind::unknown_lane_id, id, s.frame, "track switches carriageway"});
      }
      direction = lane->second.direction;
    }
  }
  return out;
}

namespace {

using HeaderIndex = std::unordered_map<std::string, std::size_t>;

HeaderIndex index_header(std::string_view header_line) {
  HeaderIndex idx;
  const auto names = detail::split(header_line, ',');
  for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(std::string(detail::trim(names[i])), i);
  return idx;
}

std::size_t require(const HeaderIndex& idx, const std::string& name, const fs::path& file) {
  const auto it = idx.find(name);
  if (it == idx.end()) {
    throw Error(ErrorKind::missing_column, "'" + name + "' in " + file.string());
  }
  return it->second;
}

std::vector<double> parse_markings(std::string_view field, const fs::path& file) {
  std::vector<double> out;
  field = detail::trim(field);
  if (field.empty()) return out;
  for (const auto part : detail::split(field, ';')) {
    const auto v = detail::parse_double(part);
    if (!v || !std::isfinite(*v)) {
      throw Error(ErrorKind::parse_error, "bad lane marking '" + std::string(part) + "' in " + file.string());
    }
    out.push_back(*v);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) {
      throw Error(ErrorKind::parse_error, "lane markings are not increasing in " + file.string());
    }
  }
  return out;
}

struct MetaInfo {
  std::optional<int> recording_id;
  double frame_rate = 25.0;
  LaneLayout layout;
};

MetaInfo read_meta(const fs::path& file, const ColumnMap& cols) {
  const auto text = detail::read_file(file);
  const auto rows = detail::lines(text);
  if (rows.size() < 2) throw Error(ErrorKind::parse_error, "meta file has no data row: " + file.string());
  const auto idx = index_header(rows[0]);
  const auto fields = detail::split(rows[1], ',');
  const auto field = [&](const std::string& name) {
    const auto i = require(idx, name, file);
    if (i >= fields.size()) throw Error(ErrorKind::parse_error, "truncated meta row in " + file.string());
    return fields[i];
  };
  MetaInfo m;
  const auto rate = detail::parse_double(field(cols.frame_rate));
  if (!rate || !(*rate > 0.0) || !std::isfinite(*rate)) {
    throw Error(ErrorKind::parse_error, "frame rate must be a positive number in " + file.string());
  }
  m.frame_rate = *rate;
  m.layout.upper_markings = parse_markings(field(cols.upper_markings), file);
  m.layout.lower_markings = parse_markings(field(cols.lower_markings), file);
  if (idx.count(cols.recording_id) != 0) {
    if (const auto id = detail::parse_int(field(cols.recording_id))) m.recording_id = static_cast<int>(*id);
  }
  return m;
}

std::map<VehicleId, VehicleClass> read_classes(const fs::path& file, const ColumnMap& cols) {
  std::map<VehicleId, VehicleClass> out;
  const auto text = detail::read_file(file);
  const auto rows = detail::lines(text);
  if (rows.empty()) return out;
  const auto idx = index_header(rows[0]);
  const auto id_col = require(idx, cols.id, file);
  const auto class_col = require(idx, cols.vehicle_class, file);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = detail::split(rows[i], ',');
    if (f.size() <= std::max(id_col, class_col)) continue;
    const auto id = detail::parse_int(f[id_col]);
    if (!id) continue;
    auto c = std::string(detail::trim(f[class_col]));
    std::transform(c.begin(), c.end(), c.begin(), [](unsigned char ch) { return std::tolower(ch); });
    out[*id] = c == "truck" ? VehicleClass::truck : VehicleClass::car;
  }
  return out;
}

struct RawRow {
  Frame frame;
  double x, y, length, width, vx, vy, ax;
  LaneId lane;
};

std::optional<int> id_from_file_name(const fs::path& file) {
  const auto stem = file.filename().string();
  const auto us = stem.find('_');
  if (us == std::string::npos) return std::nullopt;
  const auto v = detail::parse_int(std::string_view(stem).substr(0, us));
  if (!v) return std::nullopt;
  return static_cast<int>(*v);
}

}  // namespace

Recording load_recording(const fs::path& tracks_file, const fs::path& meta_file, const ColumnMap& cols,
                         IngestReport* report, const std::optional<fs::path>& tracks_meta_file) {
  IngestReport local;
  const auto meta = read_meta(meta_file, cols);
  const int rec_id = meta.recording_id.value_or(id_from_file_name(tracks_file).value_or(0));
  Recording rec = Recording::with_layout(rec_id, 1.0 / meta.frame_rate, meta.layout);

  const auto text = detail::read_file(tracks_file);
  const auto rows = detail::lines(text);
  if (rows.empty()) throw Error(ErrorKind::missing_column, "empty tracks file " + tracks_file.string());
  const auto idx = index_header(rows[0]);
  const auto c_frame = require(idx, cols.frame, tracks_file);
  const auto c_id = require(idx, cols.id, tracks_file);
  const auto c_x = require(idx, cols.x, tracks_file);
  const auto c_y = require(idx, cols.y, tracks_file);
  const auto c_w = require(idx, cols.width, tracks_file);
  const auto c_h = require(idx, cols.height, tracks_file);
  const auto c_vx = require(idx, cols.x_velocity, tracks_file);
  const auto c_vy = require(idx, cols.y_velocity, tracks_file);
  const auto c_ax = require(idx, cols.x_acceleration, tracks_file);
  const auto c_lane = require(idx, cols.lane_id, tracks_file);
  const std::size_t n_fields = detail::split(rows[0], ',').size();
  const std::string file_name = tracks_file.filename().string();

  std::map<VehicleId, std::vector<RawRow>> by_vehicle;
  std::map<VehicleId, std::size_t> rejected_per_vehicle;
  const auto reject = [&](std::size_t line, std::string reason) {
    local.rejections.push_back({file_name, line, std::move(reason)});
    ++local.rows_rejected;
  };

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (detail::trim(rows[i]).empty()) continue;
    const auto f = detail::split(rows[i], ',');
    if (f.size() != n_fields) {
      throw Error(ErrorKind::parse_error, "malformed row at line " + std::to_string(line) + " of " +
                                              tracks_file.string() + " (expected " +
                                              std::to_string(n_fields) + " fields, got " +
                                              std::to_string(f.size()) + ")");
    }
    const auto id = detail::parse_int(f[c_id]);
    const auto frame = detail::parse_int(f[c_frame]);
    const auto lane = detail::parse_int(f[c_lane]);
    if (!id || !frame || !lane) {
      reject(line, "blank or non-integer id/frame/lane");
      if (id) ++rejected_per_vehicle[*id];
      continue;
    }
    RawRow row{*frame, 0, 0, 0, 0, 0, 0, 0, static_cast<LaneId>(*lane)};
    const std::pair<std::size_t, double*> numeric[] = {{c_x, &row.x},   {c_y, &row.y},   {c_w, &row.length},
                                                       {c_h, &row.width}, {c_vx, &row.vx}, {c_vy, &row.vy},
                                                       {c_ax, &row.ax}};
    bool ok = true;
    for (const auto& [col, dst] : numeric) {
      const auto v = detail::parse_double(f[col]);
      if (!v || !std::isfinite(*v)) {
        ok = false;
        break;
      }
      *dst = *v;
    }
    if (!ok) {
      reject(line, "blank or non-finite kinematic field");
      ++rejected_per_vehicle[*id];
      continue;
    }
    by_vehicle[*id].push_back(row);
  }

  std::map<VehicleId, VehicleClass> classes;
  if (tracks_meta_file && fs::exists(*tracks_meta_file)) classes = read_classes(*tracks_meta_file, cols);

  std::size_t reversed_samples = 0;
  for (auto& [id, raw] : by_vehicle) {
    std::sort(raw.begin(), raw.end(), [](const RawRow& a, const RawRow& b) { return a.frame < b.frame; });
    bool contiguous = true;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (raw[i].frame != raw[i - 1].frame + 1) contiguous = false;
    }
    if (!contiguous) {
      if (rejected_per_vehicle.count(id) != 0) {
        local.warnings.push_back(file_name + ": vehicle " + std::to_string(id) +
                                 " dropped because rejected rows break its frame sequence");
        continue;
      }
      throw Error(ErrorKind::non_contiguous_frames, "vehicle " + std::to_string(id) + " in " +
                                                        tracks_file.string());
    }
    const auto lane0 = rec.lanes.find(raw.front().lane);
    if (lane0 == rec.lanes.end()) {
      throw Error(ErrorKind::unknown_lane_id, "vehicle " + std::to_string(id) + " at frame " +
                                                  std::to_string(raw.front().frame) + " in " +
                                                  tracks_file.string());
    }
    const double sign = lane0->second.direction;

    VehicleTrack t;
    t.id = id;
    t.length = raw.front().length;
    t.width = raw.front().width;
    if (const auto c = classes.find(id); c != classes.end()) t.vehicle_class = c->second;
    t.states.reserve(raw.size());
    for (const auto& row : raw) {
      if (rec.lanes.count(row.lane) == 0) {
        throw Error(ErrorKind::unknown_lane_id, "vehicle " + std::to_string(id) + " at frame " +
                                                    std::to_string(row.frame) + " in " +
                                                    tracks_file.string());
      }
      VehicleState s;
      s.frame = row.frame;
      // Box corner to geometric center, then into the travel-direction frame.
      s.x = sign * (row.x + 0.5 * row.length);
      s.y = row.y + 0.5 * row.width;
      s.vx = sign * row.vx;
      s.vy_raw = row.vy;
      s.ax = sign * row.ax;
      s.lane_id = row.lane;
      if (s.vx < -0.01) ++reversed_samples;
      t.states.push_back(s);
    }
    rec.tracks.emplace(id, std::move(t));
  }
  if (reversed_samples > 0) {
    local.warnings.push_back(file_name + ": " + std::to_string(reversed_samples) +
                             " samples move against their lane's driving direction");
  }
  if (rec.tracks.empty()) throw Error(ErrorKind::empty_recording, tracks_file.string());

  const auto violations = validate_recording(rec);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(v.kind, "vehicle " + std::to_string(v.vehicle_id) + ": " + v.message + " in " +
                            tracks_file.string());
  }
  local.recordings_loaded = 1;
  local.tracks_loaded = rec.tracks.size();
  if (report != nullptr) report->merge(local);
  return rec;
}

std::vector<CorpusEntry> discover_corpus(const fs::path& directory, IngestReport& report) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorKind::directory_unreadable, directory.string());
  }
  std::vector<fs::path> tracks_files;
  fs::directory_iterator it(directory, ec);
  if (ec) throw Error(ErrorKind::directory_unreadable, directory.string() + ": " + ec.message());
  const std::string suffix = "_tracks.csv";
  for (const auto& entry : it) {
    const auto name = entry.path().filename().string();
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      tracks_files.push_back(entry.path());
    }
  }
  std::sort(tracks_files.begin(), tracks_files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  std::vector<CorpusEntry> out;
  for (const auto& t : tracks_files) {
    const auto name = t.filename().string();
    const auto prefix = name.substr(0, name.size() - suffix.size());
    const auto meta = directory / (prefix + "_recordingMeta.csv");
    if (!fs::exists(meta)) {
      report.failed_files.push_back({name, ErrorKind::io_error, "no matching " + meta.filename().string()});
      continue;
    }
    CorpusEntry e{t, meta, std::nullopt};
    const auto tm = directory / (prefix + "_tracksMeta.csv");
    if (fs::exists(tm)) e.tracks_meta = tm;
    out.push_back(std::move(e));
  }
  return out;
}

std::pair<std::vector<Recording>, IngestReport> load_corpus(const fs::path& directory, const ColumnMap& columns,
                                                            unsigned workers) {
  IngestReport report;
  const auto entries = discover_corpus(directory, report);
  struct Slot {
    std::optional<Recording> recording;
    IngestReport report;
  };
  std::vector<Slot> slots(entries.size());
  detail::parallel_for(entries.size(), workers, [&](std::size_t i) {
    const auto& e = entries[i];
    try {
      slots[i].recording = load_recording(e.tracks, e.meta, columns, &slots[i].report, e.tracks_meta);
    } catch (const Error& err) {
      slots[i].report.failed_files.push_back({e.tracks.filename().string(), err.kind(), err.what()});
    } catch (const std::exception& err) {
      slots[i].report.failed_files.push_back({e.tracks.filename().string(), ErrorKind::parse_error, err.what()});
    }
  });
  std::vector<Recording> recordings;
  for (auto& s : slots) {
    report.merge(s.report);
    if (s.recording) recordings.push_back(std::move(*s.recording));
  }
  if (entries.empty() && report.failed_files.empty()) report.warnings.push_back("no recordings found");
  return {std::move(recordings), std::move(report)};
}

}  // namespace cutin
