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

#include "cutin/detection.hpp"

#include <algorithm>
#include <cmath>

namespace cutin {

std::vector<LaneTransition> find_lane_transitions(const VehicleTrack& track) {
  std::vector<LaneTransition> out;
  for (std::size_t i = 1; i < track.states.size(); ++i) {
    const auto& prev = track.states[i - 1];
    const auto& cur = track.states[i];
    if (cur.lane_id != prev.lane_id) out.push_back({track.id, cur.frame, prev.lane_id, cur.lane_id});
  }
  return out;
}

double signed_lateral_velocity(const Recording& r, const VehicleTrack& track, LaneId origin_lane,
                               LaneId target_lane, Frame t) {
  const auto& s = track.at(t);
  const double target = r.lane_center(target_lane);
  double toward = target - s.y;
  if (toward == 0.0) toward = target - r.lane_center(origin_lane);
  const double sign = toward > 0.0 ? 1.0 : (toward < 0.0 ? -1.0 : 0.0);
  return s.vy_raw * sign;
}

std::optional<Frame> detect_t1(const Recording& r, const VehicleTrack& track, const LaneTransition& tr,
                               const DetectionParams& p) {
  if (!track.covers(tr.t2 - 1, tr.t2)) return std::nullopt;
  const Frame tau = seconds_to_frames(p.tau_s, r.dt);

  Frame start = tr.t2 - 1;
  while (start > track.first_frame() && track.at(start - 1).lane_id == tr.from_lane) --start;
  const Frame last = std::min(track.last_frame(), tr.t2 - 1 + tau);
  if (start + tau > last) return std::nullopt;

  const auto n = static_cast<std::size_t>(last - start + 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = signed_lateral_velocity(r, track, tr.from_lane, tr.to_lane, start + static_cast<Frame>(i));
  }
  // mono_end[i]: last index j such that v is non-decreasing over [i, j].
  std::vector<std::size_t> mono_end(n);
  mono_end[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    mono_end[i] = v[i + 1] >= v[i] - p.monotonic_slack ? mono_end[i + 1] : i;
  }
  const auto w = static_cast<std::size_t>(tau);
  for (Frame t = start; t < tr.t2; ++t) {
    const auto i = static_cast<std::size_t>(t - start);
    if (i + w >= n) break;
    if (v[i] >= 0.0 && v[i + w] >= p.v_s && mono_end[i] >= i + w) return t;
  }
  return std::nullopt;
}

std::optional<Frame> detect_t3(const Recording& r, const VehicleTrack& track, const LaneTransition& tr,
                               const DetectionParams& p) {
  const Frame tau = seconds_to_frames(p.tau_e, r.dt);
  Frame calm = 0;
  for (Frame t = tr.t2 + 1; t <= track.last_frame(); ++t) {
    const double v = signed_lateral_velocity(r, track, tr.from_lane, tr.to_lane, t);
    calm = std::abs(v) <= p.v_e ? calm + 1 : 0;
    if (calm == tau + 1) return t - tau;
  }
  return std::nullopt;
}

std::string_view to_string(DetectionDropReason reason) {
  switch (reason) {
    case DetectionDropReason::near_track_start: return "NearTrackStart";
    case DetectionDropReason::near_track_end: return "NearTrackEnd";
    case DetectionDropReason::no_t1: return "NoT1";
    case DetectionDropReason::no_t3: return "NoT3";
  }
  return "?";
}

DetectionResult extract_events(const Recording& r, const DetectionParams& p) {
  DetectionResult out;
  const Frame tau_s = seconds_to_frames(p.tau_s, r.dt);
  const Frame tau_e = seconds_to_frames(p.tau_e, r.dt);
  for (const auto& [id, track] : r.tracks) {
    for (const auto& tr : find_lane_transitions(track)) {
      ++out.transitions;
      const auto drop = [&](DetectionDropReason reason) { out.drops.push_back({r.recording_id, tr, reason}); };
      if (tr.t2 - track.first_frame() < tau_s) {
        drop(DetectionDropReason::near_track_start);
        continue;
      }
      if (track.last_frame() - tr.t2 < tau_e) {
        drop(DetectionDropReason::near_track_end);
        continue;
      }
      const auto t1 = detect_t1(r, track, tr, p);
      if (!t1) {
        drop(DetectionDropReason::no_t1);
        continue;
      }
      const auto t3 = detect_t3(r, track, tr, p);
      if (!t3) {
        drop(DetectionDropReason::no_t3);
        continue;
      }
      LaneChangeEvent e;
      e.recording_id = r.recording_id;
      e.lcv_id = id;
      e.t1 = *t1;
      e.t2 = tr.t2;
      e.t3 = *t3;
      e.origin_lane = tr.from_lane;
      e.target_lane = tr.to_lane;
      out.events.push_back(e);
    }
  }
  return out;
}

}  // namespace cutin
