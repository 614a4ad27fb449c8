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
#include <vector>

#include "cutin/model.hpp"

namespace cutin {

/// Longitudinal velocity and acceleration samples of one window, both
/// endpoints included.
struct WindowSeries {
  std::vector<double> vx;
  std::vector<double> ax;
  double dt = 0.04;

  std::size_t n_samples() const { return vx.size(); }
  std::size_t n_steps() const { return vx.size() - 1; }
};

/// Throws Error(window_off_track) if the window leaves the track.
WindowSeries slice_window(const VehicleTrack& track, Frame anchor_frame, const WindowSpec& w, double dt);

/// Time spent with ax > 0 over the window duration, both counted in samples.
double acceleration_percentage(const WindowSeries& s);

/// (max vx - min vx) / min vx. Throws Error(non_positive_min_velocity).
double velocity_change_ratio(const WindowSeries& s);

/// Sum of |ax_j| dt over the first n_samples - 1 accelerations.
double cumulative_velocity_change(const WindowSeries& s);

double max_acceleration(const WindowSeries& s);
double min_deceleration(const WindowSeries& s);

MetricVector metric_vector(const WindowSeries& s);
MetricVector metric_vector(const VehicleTrack& track, Frame anchor_frame, const WindowSpec& w, double dt);

}  // namespace cutin
