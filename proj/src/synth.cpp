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

#include "cutin/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "cutin/error.hpp"
#include "text_util.hpp"

namespace cutin {

namespace fs = std::filesystem;

// --- lateral profiles --------------------------------------------------------

LateralProfile LateralProfile::ramp(double start, double slope, double peak, double hold) {
  if (!(slope > 0.0) || peak == 0.0 || hold < 0.0 || start < 0.0) {
    throw Error(ErrorKind::infeasible_spec, "ramp needs slope > 0, peak != 0, hold >= 0, start >= 0");
  }
  const double rise = std::abs(peak) / slope;
  LateralProfile p;
  p.kind = ProfileKind::ramp;
  p.segments.push_back({start, start + rise, 0.0, peak});
  double t = start + rise;
  if (hold > 0.0) {
    p.segments.push_back({t, t + hold, peak, peak});
    t += hold;
  }
  p.segments.push_back({t, t + rise, peak, 0.0});
  return p;
}

LateralProfile LateralProfile::plateau(double start, double velocity, double duration) {
  if (!(duration > 0.0) || start < 0.0) {
    throw Error(ErrorKind::infeasible_spec, "plateau needs duration > 0 and start >= 0");
  }
  LateralProfile p;
  p.kind = ProfileKind::plateau;
  p.segments.push_back({start, start + duration, velocity, velocity});
  return p;
}

LateralProfile LateralProfile::composite(std::span<const LateralProfile> parts) {
  LateralProfile p;
  p.kind = ProfileKind::composite;
  for (const auto& part : parts) p.segments.insert(p.segments.end(), part.segments.begin(), part.segments.end());
  std::sort(p.segments.begin(), p.segments.end(),
            [](const VelocitySegment& a, const VelocitySegment& b) { return a.t_begin < b.t_begin; });
  for (std::size_t i = 1; i < p.segments.size(); ++i) {
    if (p.segments[i].t_begin < p.segments[i - 1].t_end - 1e-12) {
      throw Error(ErrorKind::infeasible_spec, "composite profile parts overlap in time");
    }
  }
  return p;
}

double LateralProfile::velocity(double t) const {
  for (const auto& s : segments) {
    if (t >= s.t_begin && t < s.t_end) {
      return s.v_begin + (s.v_end - s.v_begin) * (t - s.t_begin) / (s.t_end - s.t_begin);
    }
  }
  return 0.0;
}

double LateralProfile::displacement(double t) const {
  double d = 0.0;
  for (const auto& s : segments) {
    if (t <= s.t_begin) break;
    const double len = s.t_end - s.t_begin;
    const double u = std::min(t, s.t_end) - s.t_begin;
    const double k = (s.v_end - s.v_begin) / len;
    d += s.v_begin * u + 0.5 * k * u * u;
  }
  return d;
}

double LateralProfile::end_time() const { return segments.empty() ? 0.0 : segments.back().t_end; }

LaneLayout default_layout() {
  return {{8.0, 11.75, 15.5, 19.25}, {23.0, 26.75, 30.5, 34.25}};
}

// --- closed-form key instants -----------------------------------------------

namespace {

constexpr double kFrameEps = 1e-9;

Frame ceil_frame(double t, double dt) { return static_cast<Frame>(std::ceil(t / dt - kFrameEps)); }
Frame floor_frame(double t, double dt) { return static_cast<Frame>(std::floor(t / dt + kFrameEps)); }

/// Linear piece of w(t) on [ta, tb); the pieces tile [0, horizon).
struct Piece {
  double ta, tb, wa, wb;

  double slope() const { return tb > ta ? (wb - wa) / (tb - ta) : 0.0; }
  double at(double t) const { return wa + slope() * (t - ta); }
  bool nondecreasing() const { return wb >= wa; }
};

std::vector<Piece> tile(const LateralProfile& p, double sign, double horizon) {
  std::vector<Piece> out;
  double t = 0.0;
  for (const auto& s : p.segments) {
    if (s.t_begin > t) out.push_back({t, s.t_begin, 0.0, 0.0});
    out.push_back({s.t_begin, s.t_end, sign * s.v_begin, sign * s.v_end});
    t = s.t_end;
  }
  if (horizon > t) out.push_back({t, horizon, 0.0, 0.0});
  return out;
}

std::optional<Frame> closed_form_t1(const std::vector<Piece>& w, Frame search_start, Frame t2, Frame last_frame,
                                    const DetectionParams& p, double dt) {
  const Frame tau = seconds_to_frames(p.tau_s, dt);
  const double ts = static_cast<double>(search_start) * dt;

  // First time at or after the search start with w >= v_s.
  std::optional<std::size_t> pi;
  double t_vs = 0.0;
  for (std::size_t i = 0; i < w.size() && !pi; ++i) {
    const auto& q = w[i];
    if (q.tb <= ts) continue;
    const double te = std::max(q.ta, ts);
    if (q.at(te) >= p.v_s) {
      t_vs = te;
      pi = i;
    } else if (q.slope() > 0.0 && q.wb > p.v_s) {
      t_vs = q.ta + (p.v_s - q.wa) / q.slope();
      pi = i;
    }
  }
  if (!pi || w[*pi].slope() < 0.0) return std::nullopt;

  // Maximal non-decreasing run of w around t_vs.
  std::size_t lo = *pi;
  while (lo > 0 && w[lo - 1].nondecreasing() && w[lo - 1].wb <= w[lo].wa) --lo;
  std::size_t hi = *pi;
  while (hi + 1 < w.size() && w[hi + 1].nondecreasing() && w[hi + 1].wa >= w[hi].wb) ++hi;
  Frame run_last = last_frame;
  if (hi + 1 < w.size()) {
    const bool drops = w[hi + 1].wa < w[hi].wb;
    run_last = drops ? ceil_frame(w[hi].tb, dt) - 1 : floor_frame(w[hi].tb, dt);
  }

  // w must also be non-negative at the start frame.
  double t_zero = w[*pi].ta;
  for (std::size_t i = lo; i <= *pi; ++i) {
    const auto& q = w[i];
    if (q.wa >= 0.0) {
      t_zero = q.ta;
      break;
    }
    if (q.slope() > 0.0 && q.wb >= 0.0) {
      t_zero = q.ta - q.wa / q.slope();
      break;
    }
  }

  const Frame t1 = std::max({ceil_frame(w[lo].ta, dt), ceil_frame(t_zero, dt), search_start,
                             ceil_frame(t_vs, dt) - tau});
  if (t1 >= t2 || t1 + tau > run_last || t1 + tau > last_frame) return std::nullopt;
  return t1;
}

std::optional<Frame> closed_form_t3(const std::vector<Piece>& w, Frame t2, Frame last_frame,
                                    const DetectionParams& p, double dt) {
  const Frame tau = seconds_to_frames(p.tau_e, dt);
  struct Calm {
    double lo, hi;
    bool open_hi;
  };
  std::vector<Calm> calm;
  for (const auto& q : w) {
    double lo = q.ta, hi = q.tb;
    const double k = q.slope();
    if (k == 0.0) {
      if (std::abs(q.wa) > p.v_e) continue;
    } else {
      const double a = q.ta + (p.v_e - q.wa) / k;
      const double b = q.ta + (-p.v_e - q.wa) / k;
      lo = std::max(lo, std::min(a, b));
      hi = std::min(hi, std::max(a, b));
      if (lo > hi) continue;
    }
    const bool open_hi = hi >= q.tb;
    if (!calm.empty() && calm.back().open_hi && calm.back().hi == lo) {
      calm.back().hi = hi;
      calm.back().open_hi = open_hi;
    } else {
      calm.push_back({lo, hi, open_hi});
    }
  }
  const double horizon = w.empty() ? 0.0 : w.back().tb;
  for (const auto& c : calm) {
    const Frame first = ceil_frame(c.lo, dt);
    Frame last = c.open_hi ? ceil_frame(c.hi, dt) - 1 : floor_frame(c.hi, dt);
    if (c.hi >= horizon) last = last_frame;
    const Frame f = std::max(t2 + 1, first);
    if (f + tau <= std::min(last, last_frame)) return f;
  }
  return std::nullopt;
}

struct Crossing {
  double time;
  bool toward_target;
};

/// Times where the displacement passes `level`, in order.
std::vector<Crossing> crossings(const LateralProfile& p, double level) {
  std::vector<Crossing> out;
  for (const auto& s : p.segments) {
    const double len = s.t_end - s.t_begin;
    const double k = (s.v_end - s.v_begin) / len;
    const double c = p.displacement(s.t_begin) - level;
    std::vector<double> roots;
    if (k == 0.0) {
      if (s.v_begin != 0.0) roots.push_back(-c / s.v_begin);
    } else {
      const double disc = s.v_begin * s.v_begin - 2.0 * k * c;
      if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        roots.push_back((-s.v_begin - r) / k);
        roots.push_back((-s.v_begin + r) / k);
      }
    }
    std::sort(roots.begin(), roots.end());
    for (const double u : roots) {
      if (u < 0.0 || u >= len) continue;
      const double v = s.v_begin + k * u;
      if (v == 0.0) continue;  // touches without crossing
      out.push_back({s.t_begin + u, v > 0.0});
    }
  }
  return out;
}

double burst_integral(const LongitudinalBurst& b, double t) {
  if (t <= b.start || b.duration <= 0.0) return 0.0;
  const double u = t - b.start;
  if (u <= b.duration) return 0.5 * u * u;
  return 0.5 * b.duration * b.duration + b.duration * (u - b.duration);
}

double burst_velocity(double v0, const LongitudinalBurst& b, double t) {
  if (b.duration <= 0.0) return v0;
  return v0 + b.accel * std::clamp(t - b.start, 0.0, b.duration);
}

double travelled(double v0, const LongitudinalBurst& b, double t) { return v0 * t + b.accel * burst_integral(b, t); }

/// LCV center minus TFV center at time t.
double center_distance_at(const ScenarioSpec& spec, double t) {
  return 0.5 * spec.lcv_length + spec.initial_gap + 0.5 * spec.tfv_length +
         travelled(spec.lcv_speed, spec.lcv_burst, t) - travelled(spec.tfv_speed, spec.tfv_burst, t);
}

/// Emits forward-difference accelerations; the last sample repeats the
/// previous one.
void fill_finite_difference_ax(VehicleTrack& t, double dt) {
  auto& s = t.states;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) s[k].ax = (s[k + 1].vx - s[k].vx) / dt;
  if (s.size() >= 2) s.back().ax = s[s.size() - 2].ax;
}

}  // namespace

double scenario_gap_at(const ScenarioSpec& spec, Frame frame, GapMode mode) {
  const double center = center_distance_at(spec, static_cast<double>(frame) * spec.dt);
  if (mode == GapMode::center_distance) return center;
  return std::max(0.0, center - 0.5 * spec.lcv_length - 0.5 * spec.tfv_length);
}

std::pair<Recording, GroundTruth> make_lane_change_scenario(const ScenarioSpec& spec,
                                                            const DetectionParams& params) {
  Recording r = Recording::with_layout(spec.recording_id, spec.dt, spec.layout);
  if (!r.has_lane(spec.origin_lane) || !r.has_lane(spec.target_lane)) {
    throw Error(ErrorKind::infeasible_spec, "origin or target lane is not in the layout");
  }
  const auto& origin = r.lanes.at(spec.origin_lane);
  const auto& target = r.lanes.at(spec.target_lane);
  if (origin.direction != target.direction || std::abs(spec.origin_lane - spec.target_lane) != 1) {
    throw Error(ErrorKind::infeasible_spec, "origin and target must be adjacent lanes of one carriageway");
  }
  const double dt = spec.dt;
  const Frame last = seconds_to_frames(spec.duration, dt);
  const double sigma = target.center > origin.center ? 1.0 : -1.0;
  const double boundary = sigma > 0.0 ? origin.upper_bound : origin.lower_bound;
  const double to_boundary = std::abs(boundary - origin.center);

  const auto cross = crossings(spec.lateral, to_boundary);
  if (cross.empty() || cross.front().time > spec.duration) {
    throw Error(ErrorKind::infeasible_spec, "lateral profile never reaches the target lane");
  }

  std::mt19937_64 rng(spec.seed);
  const double x0 = 100.0 + std::uniform_real_distribution<double>(0.0, 20.0)(rng);

  VehicleTrack lcv{kLcvId, VehicleClass::car, spec.lcv_length, spec.vehicle_width, {}};
  lcv.states.reserve(static_cast<std::size_t>(last + 1));
  bool changed_lane = false;
  for (Frame k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) * dt;
    VehicleState s;
    s.frame = k;
    s.x = x0 + travelled(spec.lcv_speed, spec.lcv_burst, t);
    s.y = origin.center + sigma * spec.lateral.displacement(t);
    s.vx = burst_velocity(spec.lcv_speed, spec.lcv_burst, t);
    s.vy_raw = sigma * spec.lateral.velocity(t);
    const auto lane = r.lane_at(s.y);
    if (!lane || (*lane != spec.origin_lane && *lane != spec.target_lane)) {
      throw Error(ErrorKind::infeasible_spec, "lateral profile leaves the origin/target lanes");
    }
    s.lane_id = *lane;
    changed_lane = changed_lane || s.lane_id == spec.target_lane;
    lcv.states.push_back(s);
  }
  if (!changed_lane) throw Error(ErrorKind::infeasible_spec, "lateral profile never reaches the target lane");
  fill_finite_difference_ax(lcv, dt);
  r.tracks.emplace(lcv.id, std::move(lcv));

  if (spec.with_tfv) {
    VehicleTrack tfv{kTfvId, VehicleClass::car, spec.tfv_length, spec.vehicle_width, {}};
    const double tfv_x0 = x0 - 0.5 * spec.lcv_length - spec.initial_gap - 0.5 * spec.tfv_length;
    for (Frame k = 0; k <= last; ++k) {
      const double t = static_cast<double>(k) * dt;
      VehicleState s;
      s.frame = k;
      s.x = tfv_x0 + travelled(spec.tfv_speed, spec.tfv_burst, t);
      s.y = target.center;
      s.vx = burst_velocity(spec.tfv_speed, spec.tfv_burst, t);
      s.lane_id = spec.target_lane;
      tfv.states.push_back(s);
    }
    fill_finite_difference_ax(tfv, dt);
    r.tracks.emplace(tfv.id, std::move(tfv));
  }

  VehicleId next_id = kTfvId + 1;
  for (const auto& b : spec.background) {
    if (!r.has_lane(b.lane) || (b.switch_time && !r.has_lane(b.switch_to))) {
      throw Error(ErrorKind::infeasible_spec, "background vehicle lane is not in the layout");
    }
    VehicleTrack t{next_id++, VehicleClass::car, b.length, spec.vehicle_width, {}};
    for (Frame k = 0; k <= last; ++k) {
      const double time = static_cast<double>(k) * dt;
      VehicleState s;
      s.frame = k;
      s.x = b.x0 + b.speed * time;
      s.vx = b.speed;
      s.lane_id = b.switch_time && time >= *b.switch_time ? b.switch_to : b.lane;
      s.y = r.lane_center(s.lane_id);
      t.states.push_back(s);
    }
    r.tracks.emplace(t.id, std::move(t));
  }

  GroundTruth truth;
  const double horizon = static_cast<double>(last) * dt;
  Frame run_start = 0;
  for (const auto& c : cross) {
    if (c.time > horizon) break;
    ManeuverTruth m;
    m.from_lane = c.toward_target ? spec.origin_lane : spec.target_lane;
    m.to_lane = c.toward_target ? spec.target_lane : spec.origin_lane;
    m.t2 = ceil_frame(c.time, dt);
    const auto w = tile(spec.lateral, c.toward_target ? 1.0 : -1.0, horizon);
    m.t1 = closed_form_t1(w, run_start, m.t2, last, params, dt);
    m.t3 = closed_form_t3(w, m.t2, last, params, dt);
    run_start = m.t2;
    truth.maneuvers.push_back(m);
  }
  if (spec.with_tfv) truth.tfv_id = kTfvId;
  truth.thresholds = params.gap_thresholds;
  if (truth.first().t1) {
    truth.x_gap_at_t1 = scenario_gap_at(spec, *truth.first().t1, GapMode::net_gap);
    truth.center_gap_at_t1 = scenario_gap_at(spec, *truth.first().t1, GapMode::center_distance);
    const double gap = params.gap_mode == GapMode::net_gap ? truth.x_gap_at_t1 : truth.center_gap_at_t1;
    for (const double theta : params.gap_thresholds) {
      truth.expected.push_back(gap < theta ? Label::cut_in : Label::other);
    }
  }
  return {std::move(r), std::move(truth)};
}

Recording make_null_scenario(double duration, std::span<const double> speeds, int recording_id, double dt) {
  if (!(duration > 0.0)) throw Error(ErrorKind::infeasible_spec, "duration must be positive");
  Recording r = Recording::with_layout(recording_id, dt, default_layout());
  std::vector<LaneId> lower;
  for (const auto& [id, info] : r.lanes) {
    if (info.direction > 0) lower.push_back(id);
  }
  const Frame last = seconds_to_frames(duration, dt);
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const LaneId lane = lower[i % lower.size()];
    VehicleTrack t{static_cast<VehicleId>(i + 1), VehicleClass::car, 4.5, 1.9, {}};
    for (Frame k = 0; k <= last; ++k) {
      VehicleState s;
      s.frame = k;
      s.x = 30.0 * static_cast<double>(i) + speeds[i] * static_cast<double>(k) * dt;
      s.y = r.lane_center(lane);
      s.vx = speeds[i];
      s.lane_id = lane;
      t.states.push_back(s);
    }
    r.tracks.emplace(t.id, std::move(t));
  }
  return r;
}

HighdFiles write_highd_files(const Recording& r, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create " + out_dir.string() + ": " + ec.message());
  char prefix[32];
  std::snprintf(prefix, sizeof(prefix), "%02d", r.recording_id);
  HighdFiles files{out_dir / (std::string(prefix) + "_tracks.csv"),
                   out_dir / (std::string(prefix) + "_recordingMeta.csv"),
                   out_dir / (std::string(prefix) + "_tracksMeta.csv")};

  const auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) s += ';';
      s += format_double(v[i]);
    }
    return s;
  };
  detail::write_file(files.meta, "id,frameRate,upperLaneMarkings,lowerLaneMarkings\n" +
                                     std::to_string(r.recording_id) + "," + format_double(1.0 / r.dt) + "," +
                                     join(r.layout.upper_markings) + "," + join(r.layout.lower_markings) + "\n");

  std::string tracks = "frame,id,x,y,width,height,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n";
  std::string meta = "id,width,height,class,drivingDirection\n";
  for (const auto& [id, t] : r.tracks) {
    if (t.states.empty()) continue;
    const int direction = r.direction_of(t.states.front().lane_id);
    const double sign = direction;
    meta += std::to_string(id) + "," + format_double(t.length) + "," + format_double(t.width) + "," +
            std::string(to_string(t.vehicle_class)) + "," + (direction < 0 ? "1" : "2") + "\n";
    for (const auto& s : t.states) {
      tracks += std::to_string(s.frame) + ',' + std::to_string(id);
      for (const double v : {sign * s.x - 0.5 * t.length, s.y - 0.5 * t.width, t.length, t.width, sign * s.vx,
                             s.vy_raw, sign * s.ax, 0.0}) {
        tracks += ',';
        tracks += format_double(v);
      }
      tracks += ',' + std::to_string(s.lane_id) + '\n';
    }
  }
  detail::write_file(files.tracks, tracks);
  detail::write_file(files.tracks_meta, meta);
  return files;
}

namespace {

LateralProfile random_part(std::mt19937_64& rng, bool use_ramp, double start, double displacement) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto uniform = [&](double a, double b) { return a + (b - a) * u01(rng); };
  const double sign = displacement < 0.0 ? -1.0 : 1.0;
  const double d = std::abs(displacement);
  if (use_ramp) {
    const double slope = uniform(0.3, 0.8);
    double peak = uniform(0.5, 1.0);
    if (peak * peak / slope > d) peak = 0.9 * std::sqrt(d * slope);
    const double hold = (d - peak * peak / slope) / peak;
    return LateralProfile::ramp(start, slope, sign * peak, hold);
  }
  const double v = uniform(0.3, 0.8);
  return LateralProfile::plateau(start, sign * v, d / v);
}

}  // namespace

ScenarioSpec random_scenario_spec(std::uint64_t seed, ProfileKind kind) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto uniform = [&](double a, double b) { return a + (b - a) * u01(rng); };

  static constexpr std::pair<LaneId, LaneId> kPairs[] = {{6, 7}, {7, 8}, {7, 6}, {8, 7},
                                                         {2, 3}, {3, 4}, {3, 2}, {4, 3}};
  ScenarioSpec spec;
  spec.seed = seed;
  const auto& pair = kPairs[std::uniform_int_distribution<std::size_t>(0, std::size(kPairs) - 1)(rng)];
  spec.origin_lane = pair.first;
  spec.target_lane = pair.second;

  const double start = uniform(6.0, 8.0);
  const double displacement = uniform(3.3, 4.0);
  switch (kind) {
    case ProfileKind::ramp: spec.lateral = random_part(rng, true, start, displacement); break;
    case ProfileKind::plateau: spec.lateral = random_part(rng, false, start, displacement); break;
    case ProfileKind::composite: {
      const auto out = random_part(rng, u01(rng) < 0.5, start, displacement);
      const double back_start = out.end_time() + uniform(2.5, 4.0);
      const auto back = random_part(rng, u01(rng) < 0.5, back_start, -(displacement + uniform(-0.3, 0.3)));
      const LateralProfile parts[] = {out, back};
      spec.lateral = LateralProfile::composite(parts);
      break;
    }
  }
  spec.duration = std::max(26.0, spec.lateral.end_time() + 6.0);
  spec.tfv_speed = uniform(20.0, 33.0);
  spec.lcv_speed = spec.tfv_speed + uniform(-1.0, 1.0);
  spec.initial_gap = uniform(3.0, 60.0);
  spec.lcv_burst = {uniform(1.0, 8.0), uniform(0.5, 3.0), uniform(-0.5, 0.5)};
  spec.tfv_burst = {uniform(1.0, 8.0), uniform(0.5, 3.0), uniform(-0.5, 0.5)};
  return spec;
}

std::vector<Scenario> make_synthetic_corpus(const SyntheticCorpusSpec& cs, const DetectionParams& params) {
  std::mt19937_64 rng(cs.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto uniform = [&](double a, double b) { return a + (b - a) * u01(rng); };

  std::vector<Scenario> out;
  const std::size_t total = cs.small_gap + cs.large_gap;
  for (std::size_t i = 0; i < total; ++i) {
    const bool small = i < cs.small_gap;
    while (true) {
      ScenarioSpec spec = random_scenario_spec(rng(), i % 2 == 0 ? ProfileKind::ramp : ProfileKind::plateau);
      spec.recording_id = static_cast<int>(i + 1);
      const double start = spec.lateral.segments.front().t_begin;
      if (small) {
        // Follower brakes as the LCV moves in; LCV builds speed beforehand.
        spec.tfv_burst = {start + uniform(-1.0, 1.0), uniform(1.5, 3.0), -uniform(0.3, 1.2)};
        spec.lcv_burst = {start - uniform(3.0, 5.0), uniform(1.0, 3.0), uniform(0.2, 0.8)};
      } else {
        spec.tfv_burst = {start + uniform(-1.0, 1.0), uniform(1.5, 3.0), uniform(-0.3, 0.3)};
        spec.lcv_burst = {start - uniform(3.0, 5.0), uniform(1.0, 3.0), uniform(-0.4, 0.4)};
      }
      const double desired = small ? uniform(2.0, 8.0) : uniform(35.0, 60.0);

      spec.initial_gap = 0.0;
      const auto probe = make_lane_change_scenario(spec, params).second;
      if (!probe.first().feasible()) continue;
      const Frame t1 = *probe.first().t1;
      const double half_lengths = 0.5 * (spec.lcv_length + spec.tfv_length);
      spec.initial_gap = desired - (scenario_gap_at(spec, t1, GapMode::center_distance) - half_lengths);
      bool clear = spec.initial_gap > 1.0;
      const Frame last = seconds_to_frames(spec.duration, spec.dt);
      for (Frame k = 0; k <= last && clear; ++k) {
        clear = scenario_gap_at(spec, k, GapMode::center_distance) - half_lengths > 0.5;
      }
      if (!clear) continue;
      auto [rec, truth] = make_lane_change_scenario(spec, params);
      out.push_back({std::move(spec), std::move(rec), std::move(truth)});
      break;
    }
  }
  return out;
}

}  // namespace cutin
