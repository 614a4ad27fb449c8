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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cutin {

using Frame = std::int64_t;
using VehicleId = std::int64_t;
using LaneId = int;

/// One sample of a vehicle's canonical kinematics.
///
/// Longitudinal quantities are normalized so that x grows in the travel
/// direction and vx >= 0 for forward motion, whichever carriageway the
/// vehicle drives on. Lateral quantities (y, vy_raw) keep the dataset's
/// convention so they stay comparable with the lane-marking positions.
struct VehicleState {
  Frame frame = 0;
  double x = 0.0;       ///< longitudinal center position (m)
  double y = 0.0;       ///< lateral center position (m)
  double vx = 0.0;      ///< longitudinal velocity (m/s)
  double vy_raw = 0.0;  ///< lateral velocity, dataset sign convention (m/s)
  double ax = 0.0;      ///< longitudinal acceleration (m/s^2)
  LaneId lane_id = 0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

enum class VehicleClass { car, truck };

std::string_view to_string(VehicleClass c);

struct VehicleTrack {
  VehicleId id = 0;
  VehicleClass vehicle_class = VehicleClass::car;
  double length = 0.0;  ///< extent along the travel direction (m)
  double width = 0.0;   ///< lateral extent (m)
  std::vector<VehicleState> states;  ///< contiguous, one per frame

  Frame first_frame() const { return states.front().frame; }
  Frame last_frame() const { return states.back().frame; }
  bool covers(Frame f) const {
    return !states.empty() && f >= first_frame() && f <= last_frame();
  }
  bool covers(Frame from, Frame to) const { return covers(from) && covers(to); }

  /// State at frame f; throws Error(frame_out_of_range) outside the track.
  const VehicleState& at(Frame f) const;
  /// State at frame f, or nullptr outside the track.
  const VehicleState* find(Frame f) const;

  friend bool operator==(const VehicleTrack&, const VehicleTrack&) = default;
};

/// Lane-marking lateral positions of the two carriageways, highD style.
///
/// Lanes are numbered from the top of the image: the upper carriageway's
/// lanes get ids 2..upper.size(), the lower carriageway's lanes continue
/// after one skipped id. Upper lanes drive towards -x (direction -1), lower
/// lanes towards +x (direction +1).
struct LaneLayout {
  std::vector<double> upper_markings;
  std::vector<double> lower_markings;

  friend bool operator==(const LaneLayout&, const LaneLayout&) = default;
};

struct LaneInfo {
  double center = 0.0;
  int direction = +1;
  double lower_bound = 0.0;  ///< marking with the smaller lateral position
  double upper_bound = 0.0;

  friend bool operator==(const LaneInfo&, const LaneInfo&) = default;
};

std::map<LaneId, LaneInfo> lanes_from_layout(const LaneLayout& layout);

struct Recording {
  int recording_id = 0;
  double dt = 0.04;
  LaneLayout layout;
  std::map<LaneId, LaneInfo> lanes;  ///< derived from layout
  std::map<VehicleId, VehicleTrack> tracks;

  /// Builds a recording whose lane table is derived from the layout.
  static Recording with_layout(int recording_id, double dt, LaneLayout layout);

  bool has_lane(LaneId lane) const { return lanes.count(lane) != 0; }
  double lane_center(LaneId lane) const;
  int direction_of(LaneId lane) const;
  /// Lane whose marking interval contains the lateral position, if any.
  std::optional<LaneId> lane_at(double y) const;
  const VehicleTrack& track(VehicleId id) const;

  friend bool operator==(const Recording&, const Recording&) = default;
};

enum class GapMode { net_gap, center_distance };

std::string_view to_string(GapMode mode);
GapMode gap_mode_from_string(std::string_view s);

struct DetectionParams {
  double v_s = 0.15;    ///< lateral speed that marks a lane-change start (m/s)
  double tau_s = 1.0;   ///< start observation horizon (s)
  double v_e = 0.1;     ///< lateral speed bound for completion (m/s)
  double tau_e = 1.0;   ///< completion observation horizon (s)
  double min_speed = 1.0;
  std::vector<double> gap_thresholds{10.0, 15.0, 20.0, 25.0, 30.0};
  GapMode gap_mode = GapMode::net_gap;
  double monotonic_slack = 1e-9;

  /// Throws Error(config_invalid) when a threshold is non-positive or the
  /// gap thresholds are not strictly increasing.
  void validate() const;

  friend bool operator==(const DetectionParams&, const DetectionParams&) = default;
};

/// Number of whole frames closest to a duration (round half up).
Frame seconds_to_frames(double seconds, double dt);

enum class Anchor { t1, t2 };

std::string_view to_string(Anchor a);

struct WindowSpec {
  Anchor anchor = Anchor::t1;
  double start_offset = 0.0;  ///< seconds relative to the anchor
  double end_offset = 0.0;

  double duration() const { return end_offset - start_offset; }

  /// Human label, e.g. "[T1-4,T1+1]" or "[T2,T2+2]".
  std::string label() const;
  /// Compact identifier usable in file and column names, e.g. "T1-4+1".
  std::string key() const;
  static WindowSpec from_key(std::string_view key);

  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

/// The four T1-anchored and five T2-anchored analysis windows.
std::vector<WindowSpec> default_windows();

struct FrameRange {
  Frame start = 0;
  Frame end = 0;  ///< inclusive

  Frame count() const { return end - start + 1; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

/// Inclusive frame range of a window around an anchor frame. Offsets are
/// rounded half up, which keeps the frame count equal to duration/dt + 1
/// for windows whose ends fall on half frames.
FrameRange window_to_frames(const WindowSpec& w, Frame anchor_frame, double dt);

struct LaneChangeEvent {
  int recording_id = 0;
  VehicleId lcv_id = 0;
  Frame t1 = 0;
  Frame t2 = 0;
  Frame t3 = 0;
  LaneId origin_lane = 0;
  LaneId target_lane = 0;
  std::optional<VehicleId> tfv_id;
  std::optional<double> x_gap_at_t1;

  Frame anchor(Anchor a) const { return a == Anchor::t1 ? t1 : t2; }

  friend bool operator==(const LaneChangeEvent&, const LaneChangeEvent&) = default;
};

enum class Metric { p_a, r_v, dv, a_max, a_min };

inline constexpr Metric kAllMetrics[] = {Metric::p_a, Metric::r_v, Metric::dv, Metric::a_max,
                                         Metric::a_min};

std::string_view to_string(Metric m);
std::string_view describe(Metric m);
Metric metric_from_string(std::string_view s);

struct MetricVector {
  double p_a = 0.0;    ///< share of the window spent accelerating
  double r_v = 0.0;    ///< (v_max - v_min) / v_min
  double dv = 0.0;     ///< cumulative |a| dt
  double a_max = 0.0;
  double a_min = 0.0;

  double get(Metric m) const;

  friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

enum class Role { lcv, tfv };

std::string_view to_string(Role r);

/// Lossless text form of a recording. Doubles are written in shortest
/// round-trip form, so deserialize(serialize(r)) == r bit for bit.
std::string serialize_recording(const Recording& r);
Recording deserialize_recording(std::string_view text);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace cutin
