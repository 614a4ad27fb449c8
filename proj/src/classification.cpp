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

#include "cutin/classification.hpp"

#include <algorithm>
#include <limits>

#include "cutin/error.hpp"

namespace cutin {

FrameIndex::FrameIndex(const Recording& r) {
  Frame lo = std::numeric_limits<Frame>::max();
  Frame hi = std::numeric_limits<Frame>::min();
  for (const auto& [id, t] : r.tracks) {
    if (t.states.empty()) continue;
    lo = std::min(lo, t.first_frame());
    hi = std::max(hi, t.last_frame());
  }
  if (lo > hi) return;
  first_ = lo;
  by_frame_.resize(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [id, t] : r.tracks) {
    if (t.states.empty()) continue;
    for (Frame f = t.first_frame(); f <= t.last_frame(); ++f) {
      by_frame_[static_cast<std::size_t>(f - first_)].push_back(id);
    }
  }
}

std::span<const VehicleId> FrameIndex::vehicles_at(Frame f) const {
  if (f < first_ || f - first_ >= static_cast<Frame>(by_frame_.size())) return {};
  return by_frame_[static_cast<std::size_t>(f - first_)];
}

namespace {

template <class Candidates>
std::optional<VehicleId> nearest_follower(const Recording& r, VehicleId lcv_id, LaneId target_lane, Frame t,
                                          const Candidates& candidates) {
  const auto& lcv = r.track(lcv_id).at(t);
  const int direction = r.direction_of(target_lane);
  std::optional<VehicleId> best;
  double best_x = -std::numeric_limits<double>::infinity();
  for (const VehicleId id : candidates) {
    if (id == lcv_id) continue;
    const auto* s = r.track(id).find(t);
    if (s == nullptr || s->lane_id != target_lane) continue;
    if (r.direction_of(s->lane_id) != direction) continue;
    if (!(s->x < lcv.x)) continue;
    if (s->x > best_x) {
      best_x = s->x;
      best = id;
    }
  }
  return best;
}

}  // namespace

std::optional<VehicleId> target_following_vehicle(const Recording& r, const FrameIndex& index, VehicleId lcv_id,
                                                  LaneId target_lane, Frame t) {
  return nearest_follower(r, lcv_id, target_lane, t, index.vehicles_at(t));
}

std::optional<VehicleId> target_following_vehicle(const Recording& r, VehicleId lcv_id, LaneId target_lane,
                                                  Frame t) {
  std::vector<VehicleId> all;
  all.reserve(r.tracks.size());
  for (const auto& [id, track] : r.tracks) all.push_back(id);
  return nearest_follower(r, lcv_id, target_lane, t, all);
}

double x_gap(const Recording& r, VehicleId lcv_id, VehicleId tfv_id, Frame t, GapMode mode) {
  const auto& lcv = r.track(lcv_id);
  const auto& tfv = r.track(tfv_id);
  const auto* a = lcv.find(t);
  const auto* b = tfv.find(t);
  if (a == nullptr || b == nullptr) {
    throw Error(ErrorKind::vehicle_missing_at_frame,
                "vehicle " + std::to_string(a == nullptr ? lcv_id : tfv_id) + " at frame " + std::to_string(t));
  }
  if (mode == GapMode::center_distance) return a->x - b->x;
  const double gap = (a->x - 0.5 * lcv.length) - (b->x + 0.5 * tfv.length);
  return std::max(0.0, gap);
}

std::string_view to_string(ExclusionCode code) {
  switch (code) {
    case ExclusionCode::no_tfv_throughout: return "NoTfvThroughout";
    case ExclusionCode::tfv_changed: return "TfvChanged";
    case ExclusionCode::low_speed: return "LowSpeed";
    case ExclusionCode::window_off_track: return "WindowOffTrack";
  }
  return "?";
}

FilterResult attach_and_filter(const std::vector<LaneChangeEvent>& events, const Recording& r,
                               const DetectionParams& p, std::span<const WindowSpec> windows) {
  FilterResult out;
  const FrameIndex index(r);
  for (const auto& e : events) {
    const auto drop = [&](ExclusionCode code, std::string detail) {
      out.dropped.push_back({e, code, std::move(detail)});
    };
    const auto& lcv = r.track(e.lcv_id);

    std::vector<std::optional<VehicleId>> followers;
    followers.reserve(static_cast<std::size_t>(e.t3 - e.t1 + 1));
    for (Frame f = e.t1; f <= e.t3; ++f) {
      followers.push_back(target_following_vehicle(r, index, e.lcv_id, e.target_lane, f));
    }
    const auto missing = std::find(followers.begin(), followers.end(), std::nullopt);
    if (missing != followers.end()) {
      drop(ExclusionCode::no_tfv_throughout,
           "no follower at frame " + std::to_string(e.t1 + (missing - followers.begin())));
      continue;
    }
    const VehicleId tfv_id = *followers.front();
    const auto changed = std::find_if(followers.begin(), followers.end(),
                                      [&](const auto& id) { return *id != tfv_id; });
    if (changed != followers.end()) {
      drop(ExclusionCode::tfv_changed, "follower " + std::to_string(tfv_id) + " replaced by " +
                                           std::to_string(**changed) + " at frame " +
                                           std::to_string(e.t1 + (changed - followers.begin())));
      continue;
    }
    const auto& tfv = r.track(tfv_id);
    std::optional<Frame> slow;
    for (Frame f = e.t1; f <= e.t3 && !slow; ++f) {
      if (!(lcv.at(f).vx > p.min_speed) || !(tfv.at(f).vx > p.min_speed)) slow = f;
    }
    if (slow) {
      drop(ExclusionCode::low_speed, "speed at or below " + format_double(p.min_speed) + " m/s at frame " +
                                         std::to_string(*slow));
      continue;
    }
    const auto off = std::find_if(windows.begin(), windows.end(), [&](const WindowSpec& w) {
      const auto fr = window_to_frames(w, e.anchor(w.anchor), r.dt);
      return !lcv.covers(fr.start, fr.end) || !tfv.covers(fr.start, fr.end);
    });
    if (off != windows.end()) {
      drop(ExclusionCode::window_off_track, "window " + off->label() + " leaves a recorded track");
      continue;
    }
    LaneChangeEvent kept = e;
    kept.tfv_id = tfv_id;
    kept.x_gap_at_t1 = x_gap(r, e.lcv_id, tfv_id, e.t1, p.gap_mode);
    out.kept.push_back(kept);
  }
  return out;
}

std::string_view to_string(Label l) { return l == Label::cut_in ? "CutIn" : "OtherLaneChange"; }

Label ClassifiedEvent::label_at(double threshold) const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] == threshold) return labels[i];
  }
  throw Error(ErrorKind::config_invalid, "threshold " + format_double(threshold) + " was not classified");
}

ClassifiedEvent classify(const LaneChangeEvent& event, std::span<const double> thresholds) {
  if (!event.x_gap_at_t1) {
    throw Error(ErrorKind::config_invalid, "event of vehicle " + std::to_string(event.lcv_id) + " has no X-gap");
  }
  ClassifiedEvent c{event, {thresholds.begin(), thresholds.end()}, {}};
  c.labels.reserve(thresholds.size());
  for (const double theta : thresholds) {
    c.labels.push_back(*event.x_gap_at_t1 < theta ? Label::cut_in : Label::other);
  }
  return c;
}

}  // namespace cutin
