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

// Kinematic set-pieces with analytically known lane-change instants.
//
// The LCV's lateral velocity is piecewise linear in time, so its position
// is piecewise quadratic and every key instant has a closed form. The
// ground truth below is derived from the continuous profile and never
// looks at the sampled frames the detector consumes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cutin/classification.hpp"
#include "cutin/model.hpp"

namespace cutin {

/// v(t) moves linearly from v_begin to v_end on [t_begin, t_end).
struct VelocitySegment {
  double t_begin = 0.0;
  double t_end = 0.0;
  double v_begin = 0.0;
  double v_end = 0.0;
};

enum class ProfileKind { ramp, plateau, composite };

/// Lateral velocity towards the first target lane; zero outside segments.
struct LateralProfile {
  ProfileKind kind = ProfileKind::plateau;
  std::vector<VelocitySegment> segments;

  /// Trapezoid: rise at `slope` to `peak` (signed), hold, fall back at `slope`.
  static LateralProfile ramp(double start, double slope, double peak, double hold);
  /// Step to `velocity` at `start`, back to zero after `duration`.
  static LateralProfile plateau(double start, double velocity, double duration);
  /// Back-to-back parts; each part keeps its own absolute timing.
  static LateralProfile composite(std::span<const LateralProfile> parts);

  double velocity(double t) const;
  /// Integral of the velocity from 0 to t.
  double displacement(double t) const;
  double end_time() const;
};

struct LongitudinalBurst {
  double start = 0.0;     ///< s
  double duration = 0.0;  ///< s
  double accel = 0.0;     ///< m/s^2 held over the burst
};

/// A vehicle that only holds (or instantly swaps) its lane.
struct BackgroundVehicle {
  LaneId lane = 0;
  double x0 = 0.0;  ///< canonical center position at t = 0
  double speed = 30.0;
  std::optional<double> switch_time;
  LaneId switch_to = 0;
  double length = 4.5;
};

/// Three-lane carriageways, 3.75 m lanes: upper ids 2-4, lower ids 6-8.
LaneLayout default_layout();

inline constexpr VehicleId kLcvId = 1;
inline constexpr VehicleId kTfvId = 2;

struct ScenarioSpec {
  int recording_id = 1;
  double dt = 0.04;
  double duration = 26.0;
  LaneLayout layout = default_layout();
  LaneId origin_lane = 6;
  LaneId target_lane = 7;
  double lcv_speed = 30.0;
  double tfv_speed = 30.0;
  double initial_gap = 20.0;  ///< bumper-to-bumper LCV-TFV gap at t = 0
  double lcv_length = 4.5;
  double tfv_length = 4.5;
  double vehicle_width = 1.9;
  LateralProfile lateral;
  LongitudinalBurst lcv_burst;
  LongitudinalBurst tfv_burst;
  bool with_tfv = true;
  std::vector<BackgroundVehicle> background;
  std::uint64_t seed = 0;  ///< jitters the LCV's start position
};

/// Key instants of one lane-id crossing of the LCV.
struct ManeuverTruth {
  LaneId from_lane = 0;
  LaneId to_lane = 0;
  Frame t2 = 0;
  std::optional<Frame> t1;
  std::optional<Frame> t3;

  bool feasible() const { return t1.has_value() && t3.has_value(); }
};

struct GroundTruth {
  std::vector<ManeuverTruth> maneuvers;
  std::optional<VehicleId> tfv_id;
  double x_gap_at_t1 = 0.0;       ///< net gap at the first maneuver's T1
  double center_gap_at_t1 = 0.0;  ///< center distance at the same frame
  std::vector<double> thresholds;
  std::vector<Label> expected;  ///< per threshold, from the net gap

  const ManeuverTruth& first() const { return maneuvers.front(); }
};

/// Throws Error(infeasible_spec) when the profile never crosses into the
/// target lane within the duration, or leaves the origin/target lanes.
std::pair<Recording, GroundTruth> make_lane_change_scenario(const ScenarioSpec& spec,
                                                            const DetectionParams& params = {});

/// LCV-TFV gap at a frame, from the closed-form longitudinal motion.
double scenario_gap_at(const ScenarioSpec& spec, Frame frame, GapMode mode);

/// Vehicles that keep their lanes for the whole recording.
Recording make_null_scenario(double duration, std::span<const double> speeds, int recording_id = 1,
                             double dt = 0.04);

struct HighdFiles {
  std::filesystem::path tracks;
  std::filesystem::path meta;
  std::filesystem::path tracks_meta;
};

/// Writes <NN>_tracks.csv, <NN>_recordingMeta.csv and <NN>_tracksMeta.csv.
HighdFiles write_highd_files(const Recording& r, const std::filesystem::path& out_dir);

/// Random single-change scenario of the given kind (composite = out and back).
ScenarioSpec random_scenario_spec(std::uint64_t seed, ProfileKind kind);

struct SyntheticCorpusSpec {
  std::size_t small_gap = 20;  ///< scenarios with X-gap at T1 in [2, 8) m
  std::size_t large_gap = 20;  ///< scenarios with X-gap at T1 in [35, 60) m
  std::uint64_t seed = 1;

  friend bool operator==(const SyntheticCorpusSpec&, const SyntheticCorpusSpec&) = default;
};

struct Scenario {
  ScenarioSpec spec;
  Recording recording;
  GroundTruth truth;
};

/// Cut-in-like (small gap, braking follower) and other-like (large gap)
/// scenarios, one recording each. Deterministic per seed.
std::vector<Scenario> make_synthetic_corpus(const SyntheticCorpusSpec& spec, const DetectionParams& params = {});

}  // namespace cutin
