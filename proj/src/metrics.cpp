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

#include "cutin/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cutin/error.hpp"

namespace cutin {

namespace {

void check(const WindowSeries& s) {
  if (s.vx.size() < 2 || s.vx.size() != s.ax.size()) {
    throw Error(ErrorKind::window_off_track, "a window series needs >= 2 paired samples");
  }
}

}  // namespace

WindowSeries slice_window(const VehicleTrack& track, Frame anchor_frame, const WindowSpec& w, double dt) {
  const auto fr = window_to_frames(w, anchor_frame, dt);
  if (!track.covers(fr.start, fr.end)) {
    throw Error(ErrorKind::window_off_track, "window " + w.label() + " at frame " + std::to_string(anchor_frame) +
                                                 " leaves vehicle " + std::to_string(track.id));
  }
  WindowSeries s;
  s.dt = dt;
  s.vx.reserve(static_cast<std::size_t>(fr.count()));
  s.ax.reserve(static_cast<std::size_t>(fr.count()));
  for (Frame f = fr.start; f <= fr.end; ++f) {
    const auto& st = track.at(f);
    s.vx.push_back(st.vx);
    s.ax.push_back(st.ax);
  }
  check(s);
  return s;
}

double acceleration_percentage(const WindowSeries& s) {
  check(s);
  const auto accelerating = std::count_if(s.ax.begin(), s.ax.end(), [](double a) { return a > 0.0; });
  const double t_a = static_cast<double>(accelerating) * s.dt;
  const double t_total = static_cast<double>(s.n_samples()) * s.dt;
  return t_a / t_total;
}

double velocity_change_ratio(const WindowSeries& s) {
  check(s);
  const auto [lo, hi] = std::minmax_element(s.vx.begin(), s.vx.end());
  if (!(*lo > 0.0)) {
    throw Error(ErrorKind::non_positive_min_velocity, "minimum window velocity is " + format_double(*lo));
  }
  return (*hi - *lo) / *lo;
}

double cumulative_velocity_change(const WindowSeries& s) {
  check(s);
  // Neumaier summation keeps long windows correctly rounded.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j = 0; j < s.n_steps(); ++j) {
    const double term = std::abs(s.ax[j] * s.dt);
    const double next = sum + term;
    carry += std::abs(sum) >= term ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return sum + carry;
}

double max_acceleration(const WindowSeries& s) {
  check(s);
  return *std::max_element(s.ax.begin(), s.ax.end());
}

double min_deceleration(const WindowSeries& s) {
  check(s);
  return *std::min_element(s.ax.begin(), s.ax.end());
}

MetricVector metric_vector(const WindowSeries& s) {
  return {acceleration_percentage(s), velocity_change_ratio(s), cumulative_velocity_change(s),
          max_acceleration(s), min_deceleration(s)};
}

MetricVector metric_vector(const VehicleTrack& track, Frame anchor_frame, const WindowSpec& w, double dt) {
  return metric_vector(slice_window(track, anchor_frame, w, dt));
}

}  // namespace cutin
