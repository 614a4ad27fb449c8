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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cutin/model.hpp"

namespace cutin {

/// Vehicles present at each frame of a recording.
class FrameIndex {
 public:
  explicit FrameIndex(const Recording& r);

  std::span<const VehicleId> vehicles_at(Frame f) const;

 private:
  Frame first_ = 0;
  std::vector<std::vector<VehicleId>> by_frame_;
};

/// Nearest vehicle whose center is strictly behind the LCV's center, in the
/// target lane, at frame t. Never the LCV itself.
std::optional<VehicleId> target_following_vehicle(const Recording& r, const FrameIndex& index,
                                                  VehicleId lcv_id, LaneId target_lane, Frame t);
std::optional<VehicleId> target_following_vehicle(const Recording& r, VehicleId lcv_id,
                                                  LaneId target_lane, Frame t);

/// Longitudinal LCV-to-TFV distance at frame t. net_gap is bumper to
/// bumper and clamped at zero; center_distance is between box centers.
double x_gap(const Recording& r, VehicleId lcv_id, VehicleId tfv_id, Frame t, GapMode mode);

enum class ExclusionCode { no_tfv_throughout, tfv_changed, low_speed, window_off_track };

std::string_view to_string(ExclusionCode code);

struct Exclusion {
  LaneChangeEvent event;
  ExclusionCode code = ExclusionCode::no_tfv_throughout;
  std::string detail;
};

struct FilterResult {
  std::vector<LaneChangeEvent> kept;  ///< tfv_id and x_gap_at_t1 filled
  std::vector<Exclusion> dropped;
};

/// Attaches the TFV and applies the exclusion rules in order: a TFV at every
/// frame of [t1, t3], the same TFV throughout, both vehicles faster than
/// min_speed throughout, and every analysis window inside both tracks.
FilterResult attach_and_filter(const std::vector<LaneChangeEvent>& events, const Recording& r,
                               const DetectionParams& p, std::span<const WindowSpec> windows);

enum class Label { cut_in, other };

std::string_view to_string(Label l);

struct ClassifiedEvent {
  LaneChangeEvent event;
  std::vector<double> thresholds;
  std::vector<Label> labels;  ///< parallel to thresholds

  Label label_at(double threshold) const;
};

/// Cut-in at threshold θ iff the X-gap at T1 is strictly below θ.
ClassifiedEvent classify(const LaneChangeEvent& event, std::span<const double> thresholds);

}  // namespace cutin
