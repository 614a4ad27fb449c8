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

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "cutin/model.hpp"

namespace cutin {

/// A change of lane id between two consecutive frames of one track.
struct LaneTransition {
  VehicleId vehicle_id = 0;
  Frame t2 = 0;  ///< first frame carrying the new lane id
  LaneId from_lane = 0;
  LaneId to_lane = 0;

  friend bool operator==(const LaneTransition&, const LaneTransition&) = default;
};

std::vector<LaneTransition> find_lane_transitions(const VehicleTrack& track);

/// Lateral velocity at frame t, positive when moving towards the target
/// lane's center. When the vehicle sits exactly on that center the sign is
/// taken from the origin-to-target direction.
double signed_lateral_velocity(const Recording& r, const VehicleTrack& track, LaneId origin_lane,
                               LaneId target_lane, Frame t);

/// Start of the lateral movement: the earliest frame t before the crossing,
/// within the run of frames spent in the origin lane, such that the signed
/// lateral velocity v satisfies v(t) >= 0, v(t + tau_s) >= v_s and v is
/// non-decreasing between consecutive frames of [t, t + tau_s].
std::optional<Frame> detect_t1(const Recording& r, const VehicleTrack& track, const LaneTransition& tr,
                               const DetectionParams& p);

/// End of the lateral movement: the earliest frame t after the crossing
/// such that |v| <= v_e on every frame of [t, t + tau_e].
std::optional<Frame> detect_t3(const Recording& r, const VehicleTrack& track, const LaneTransition& tr,
                               const DetectionParams& p);

enum class DetectionDropReason { near_track_start, near_track_end, no_t1, no_t3 };

std::string_view to_string(DetectionDropReason reason);

struct DetectionDrop {
  int recording_id = 0;
  LaneTransition transition;
  DetectionDropReason reason = DetectionDropReason::no_t1;
};

struct DetectionResult {
  std::size_t transitions = 0;
  std::vector<LaneChangeEvent> events;  ///< ordered by (lcv_id, t2); TFV fields unset
  std::vector<DetectionDrop> drops;
};

DetectionResult extract_events(const Recording& r, const DetectionParams& p);

}  // namespace cutin
