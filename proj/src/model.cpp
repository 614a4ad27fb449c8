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

#include "cutin/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cutin/error.hpp"
#include "text_util.hpp"

namespace cutin {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::missing_column: return "MissingColumn";
    case ErrorKind::non_contiguous_frames: return "NonContiguousFrames";
    case ErrorKind::unknown_lane_id: return "UnknownLaneId";
    case ErrorKind::empty_recording: return "EmptyRecording";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::directory_unreadable: return "DirectoryUnreadable";
    case ErrorKind::io_error: return "IoError";
    case ErrorKind::infeasible_spec: return "InfeasibleSpec";
    case ErrorKind::frame_out_of_range: return "FrameOutOfRange";
    case ErrorKind::vehicle_missing_at_frame: return "VehicleMissingAtFrame";
    case ErrorKind::window_off_track: return "WindowOffTrack";
    case ErrorKind::non_positive_min_velocity: return "NonPositiveMinVelocity";
    case ErrorKind::empty_sample: return "EmptySample";
    case ErrorKind::exact_with_ties: return "ExactWithTies";
    case ErrorKind::config_invalid: return "ConfigInvalid";
  }
  return "Unknown";
}

std::string_view to_string(VehicleClass c) { return c == VehicleClass::truck ? "Truck" : "Car"; }

const VehicleState* VehicleTrack::find(Frame f) const {
  if (!covers(f)) return nullptr;
  return &states[static_cast<std::size_t>(f - first_frame())];
}

const VehicleState& VehicleTrack::at(Frame f) const {
  const auto* s = find(f);
  if (s == nullptr) {
    throw Error(ErrorKind::frame_out_of_range,
                "vehicle " + std::to_string(id) + " has no sample at frame " + std::to_string(f));
  }
  return *s;
}

std::map<LaneId, LaneInfo> lanes_from_layout(const LaneLayout& layout) {
  std::map<LaneId, LaneInfo> lanes;
  const auto& up = layout.upper_markings;
  const auto& lo = layout.lower_markings;
  for (std::size_t k = 1; k < up.size(); ++k) {
    lanes[static_cast<LaneId>(k + 1)] = LaneInfo{0.5 * (up[k - 1] + up[k]), -1, up[k - 1], up[k]};
  }
  const auto lower_base = static_cast<LaneId>(up.size() + 1);
  for (std::size_t k = 1; k < lo.size(); ++k) {
    lanes[lower_base + static_cast<LaneId>(k)] = LaneInfo{0.5 * (lo[k - 1] + lo[k]), +1, lo[k - 1], lo[k]};
  }
  return lanes;
}

Recording Recording::with_layout(int recording_id, double dt, LaneLayout layout) {
  Recording r;
  r.recording_id = recording_id;
  r.dt = dt;
  r.lanes = lanes_from_layout(layout);
  r.layout = std::move(layout);
  return r;
}

double Recording::lane_center(LaneId lane) const {
  const auto it = lanes.find(lane);
  if (it == lanes.end()) {
    throw Error(ErrorKind::unknown_lane_id, "lane " + std::to_string(lane) + " is not in recording " +
                                                std::to_string(recording_id));
  }
  return it->second.center;
}

int Recording::direction_of(LaneId lane) const {
  const auto it = lanes.find(lane);
  if (it == lanes.end()) {
    throw Error(ErrorKind::unknown_lane_id, "lane " + std::to_string(lane) + " is not in recording " +
                                                std::to_string(recording_id));
  }
  return it->second.direction;
}

std::optional<LaneId> Recording::lane_at(double y) const {
  for (const auto& [id, info] : lanes) {
    if (y >= info.lower_bound && y < info.upper_bound) return id;
  }
  return std::nullopt;
}

const VehicleTrack& Recording::track(VehicleId id) const {
  const auto it = tracks.find(id);
  if (it == tracks.end()) {
    throw Error(ErrorKind::vehicle_missing_at_frame,
                "vehicle " + std::to_string(id) + " is not in recording " + std::to_string(recording_id));
  }
  return it->second;
}

std::string_view to_string(GapMode mode) {
  return mode == GapMode::net_gap ? "net_gap" : "center_distance";
}

GapMode gap_mode_from_string(std::string_view s) {
  if (s == "net_gap") return GapMode::net_gap;
  if (s == "center_distance") return GapMode::center_distance;
  throw Error(ErrorKind::config_invalid, "unknown gap mode '" + std::string(s) + "'");
}

void DetectionParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw Error(ErrorKind::config_invalid, std::string(name) + " must be strictly positive");
    }
  };
  positive(v_s, "v_s");
  positive(tau_s, "tau_s");
  positive(v_e, "v_e");
  positive(tau_e, "tau_e");
  positive(min_speed, "min_speed");
  if (gap_thresholds.empty()) throw Error(ErrorKind::config_invalid, "gap_thresholds is empty");
  for (std::size_t i = 0; i < gap_thresholds.size(); ++i) {
    positive(gap_thresholds[i], "gap threshold");
    if (i > 0 && !(gap_thresholds[i] > gap_thresholds[i - 1])) {
      throw Error(ErrorKind::config_invalid, "gap_thresholds must be strictly increasing");
    }
  }
  if (monotonic_slack < 0.0) throw Error(ErrorKind::config_invalid, "monotonic_slack is negative");
}

Frame seconds_to_frames(double seconds, double dt) {
  double q = seconds / dt;
  // Snap values that are a half or whole frame up to division noise.
  const double halves = std::round(q * 2.0);
  if (std::abs(q * 2.0 - halves) < 1e-6) q = halves / 2.0;
  return static_cast<Frame>(std::floor(q + 0.5));
}

std::string_view to_string(Anchor a) { return a == Anchor::t1 ? "T1" : "T2"; }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

std::string signed_offset(double v) {
  return (v < 0.0 ? "-" : "+") + format_double(std::abs(v));
}

}  // namespace

std::string WindowSpec::label() const {
  const std::string a(to_string(anchor));
  const auto end_part = [&](double v) { return v == 0.0 ? a : a + signed_offset(v); };
  return "[" + end_part(start_offset) + "," + end_part(end_offset) + "]";
}

std::string WindowSpec::key() const {
  return std::string(to_string(anchor)) + signed_offset(start_offset) + signed_offset(end_offset);
}

WindowSpec WindowSpec::from_key(std::string_view key) {
  const auto fail = [&] {
    return Error(ErrorKind::config_invalid, "malformed window key '" + std::string(key) + "'");
  };
  key = detail::trim(key);
  if (key.size() < 6 || key[0] != 'T' || (key[1] != '1' && key[1] != '2')) throw fail();
  WindowSpec w;
  w.anchor = key[1] == '1' ? Anchor::t1 : Anchor::t2;
  const auto rest = key.substr(2);
  const auto second = rest.find_first_of("+-", 1);
  if (second == std::string_view::npos) throw fail();
  const auto a = detail::parse_double(rest.substr(0, second));
  const auto b = detail::parse_double(rest.substr(second));
  if (!a || !b || !(*a < *b)) throw fail();
  w.start_offset = *a;
  w.end_offset = *b;
  return w;
}

std::vector<WindowSpec> default_windows() {
  return {
      {Anchor::t1, -4.0, 1.0}, {Anchor::t1, -3.0, 1.0}, {Anchor::t1, -2.0, 1.0},
      {Anchor::t1, -1.0, 1.0}, {Anchor::t2, -2.0, 0.0}, {Anchor::t2, -1.5, 0.5},
      {Anchor::t2, -1.0, 1.0}, {Anchor::t2, -0.5, 1.5}, {Anchor::t2, 0.0, 2.0},
  };
}

FrameRange window_to_frames(const WindowSpec& w, Frame anchor_frame, double dt) {
  return {anchor_frame + seconds_to_frames(w.start_offset, dt),
          anchor_frame + seconds_to_frames(w.end_offset, dt)};
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::p_a: return "p_a";
    case Metric::r_v: return "r_v";
    case Metric::dv: return "dv";
    case Metric::a_max: return "a_max";
    case Metric::a_min: return "a_min";
  }
  return "?";
}

std::string_view describe(Metric m) {
  switch (m) {
    case Metric::p_a: return "acceleration percentage";
    case Metric::r_v: return "velocity change ratio";
    case Metric::dv: return "cumulative velocity change";
    case Metric::a_max: return "maximum acceleration";
    case Metric::a_min: return "minimum deceleration";
  }
  return "?";
}

Metric metric_from_string(std::string_view s) {
  for (const auto m : kAllMetrics) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorKind::config_invalid, "unknown metric '" + std::string(s) + "'");
}

double MetricVector::get(Metric m) const {
  switch (m) {
    case Metric::p_a: return p_a;
    case Metric::r_v: return r_v;
    case Metric::dv: return dv;
    case Metric::a_max: return a_max;
    case Metric::a_min: return a_min;
  }
  return 0.0;
}

std::string_view to_string(Role r) { return r == Role::lcv ? "lcv" : "tfv"; }

// --- lossless text serialization -------------------------------------------

std::string serialize_recording(const Recording& r) {
  std::string out;
  const auto num = [&](double v) {
    out += ' ';
    out += format_double(v);
  };
  const auto integer = [&](std::int64_t v) {
    out += ' ';
    out += std::to_string(v);
  };
  out += "recording";
  integer(r.recording_id);
  num(r.dt);
  out += "\nupper";
  integer(static_cast<std::int64_t>(r.layout.upper_markings.size()));
  for (double m : r.layout.upper_markings) num(m);
  out += "\nlower";
  integer(static_cast<std::int64_t>(r.layout.lower_markings.size()));
  for (double m : r.layout.lower_markings) num(m);
  out += '\n';
  for (const auto& [id, t] : r.tracks) {
    out += "track";
    integer(id);
    out += ' ';
    out += to_string(t.vehicle_class);
    num(t.length);
    num(t.width);
    integer(static_cast<std::int64_t>(t.states.size()));
    out += '\n';
    for (const auto& s : t.states) {
      out += std::to_string(s.frame);
      num(s.x);
      num(s.y);
      num(s.vx);
      num(s.vy_raw);
      num(s.ax);
      integer(s.lane_id);
      out += '\n';
    }
  }
  return out;
}

Recording deserialize_recording(std::string_view text) {
  const auto all = detail::lines(text);
  std::size_t li = 0;
  std::vector<std::string_view> tok;
  const auto next_line = [&](std::string_view expect) {
    if (li >= all.size()) throw Error(ErrorKind::parse_error, "unexpected end of serialized recording");
    tok = detail::split(all[li++], ' ');
    if (!expect.empty() && tok.front() != expect) {
      throw Error(ErrorKind::parse_error, "expected '" + std::string(expect) + "' at line " +
                                              std::to_string(li));
    }
  };
  const auto num = [&](std::size_t i) {
    if (i >= tok.size()) throw Error(ErrorKind::parse_error, "missing field at line " + std::to_string(li));
    const auto v = detail::parse_double(tok[i]);
    if (!v) throw Error(ErrorKind::parse_error, "bad number at line " + std::to_string(li));
    return *v;
  };
  const auto integer = [&](std::size_t i) {
    if (i >= tok.size()) throw Error(ErrorKind::parse_error, "missing field at line " + std::to_string(li));
    const auto v = detail::parse_int(tok[i]);
    if (!v) throw Error(ErrorKind::parse_error, "bad integer at line " + std::to_string(li));
    return *v;
  };
  const auto markings = [&](std::string_view name) {
    next_line(name);
    std::vector<double> m(static_cast<std::size_t>(integer(1)));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = num(2 + i);
    return m;
  };

  next_line("recording");
  const auto id = static_cast<int>(integer(1));
  const double dt = num(2);
  LaneLayout layout;
  layout.upper_markings = markings("upper");
  layout.lower_markings = markings("lower");
  Recording r = Recording::with_layout(id, dt, std::move(layout));
  while (li < all.size()) {
    next_line("track");
    VehicleTrack t;
    t.id = integer(1);
    t.vehicle_class = tok.at(2) == "Truck" ? VehicleClass::truck : VehicleClass::car;
    t.length = num(3);
    t.width = num(4);
    const auto n = static_cast<std::size_t>(integer(5));
    t.states.resize(n);
    for (auto& s : t.states) {
      next_line({});
      s.frame = integer(0);
      s.x = num(1);
      s.y = num(2);
      s.vx = num(3);
      s.vy_raw = num(4);
      s.ax = num(5);
      s.lane_id = static_cast<LaneId>(integer(6));
    }
    r.tracks.emplace(t.id, std::move(t));
  }
  return r;
}

namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::io_error, "write failed for " + path.string());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

}  // namespace cutin
