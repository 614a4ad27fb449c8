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

#include <doctest.h>

#include <cmath>
#include <functional>

#include "cutin/detection.hpp"
#include "cutin/error.hpp"
#include "cutin/highd_ingest.hpp"
#include "cutin/synth.hpp"
#include "fixtures.hpp"

using namespace cutin;
using cutin::testing::TempDir;

namespace {

ScenarioSpec plateau_spec(double start, double v, double duration) {
  ScenarioSpec spec;
  spec.lateral = LateralProfile::plateau(start, v, duration);
  return spec;
}

ErrorKind error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io_error;
}

}  // namespace

TEST_CASE("lateral profiles integrate in closed form") {
  const auto ramp = LateralProfile::ramp(1.0, 0.5, 1.0, 2.0);
  CHECK(ramp.velocity(0.5) == 0.0);
  CHECK(ramp.velocity(2.0) == doctest::Approx(0.5));
  CHECK(ramp.velocity(3.5) == 1.0);
  CHECK(ramp.end_time() == doctest::Approx(7.0));
  // Two triangles of area 1 plus a 2 s hold at 1 m/s.
  CHECK(ramp.displacement(100.0) == doctest::Approx(4.0));
  CHECK(ramp.displacement(3.0) == doctest::Approx(1.0));

  const auto plateau = LateralProfile::plateau(2.0, -0.4, 5.0);
  CHECK(plateau.displacement(4.5) == doctest::Approx(-1.0));
  CHECK(plateau.velocity(7.0) == 0.0);

  const LateralProfile parts[] = {LateralProfile::plateau(0.0, 1, 2), LateralProfile::plateau(1.0, 1, 2)};
  CHECK_THROWS_AS(LateralProfile::composite(parts), Error);
}

TEST_CASE("plateau of 0.2 m/s from 2.0 s") {
  const auto [rec, truth] = make_lane_change_scenario(plateau_spec(2.0, 0.2, 14.0));
  REQUIRE(truth.maneuvers.size() == 1);
  const auto& m = truth.first();
  // The boundary is 1.875 m from the origin center: 2.0 s + 9.375 s.
  CHECK(m.t2 == 285);
  // Zero lateral speed is non-decreasing into the plateau, so the start
  // predicate already holds one observation horizon before 2.0 s.
  REQUIRE(m.t1.has_value());
  CHECK(*m.t1 == 25);
  REQUIRE(m.t3.has_value());
  CHECK(*m.t3 == 400);
  CHECK(m.from_lane == 6);
  CHECK(m.to_lane == 7);

  const auto& lcv = rec.track(kLcvId);
  CHECK(lcv.at(m.t2 - 1).lane_id == 6);
  CHECK(lcv.at(m.t2).lane_id == 7);
}

TEST_CASE("zero lateral velocity never crosses") {
  CHECK(error_kind([] { make_lane_change_scenario(plateau_spec(2.0, 0.0, 5.0)); }) == ErrorKind::infeasible_spec);
  ScenarioSpec empty;
  CHECK(error_kind([&] { make_lane_change_scenario(empty); }) == ErrorKind::infeasible_spec);
}

TEST_CASE("profiles that leave the origin/target pair are rejected") {
  CHECK(error_kind([] { make_lane_change_scenario(plateau_spec(2.0, 1.0, 8.0)); }) == ErrorKind::infeasible_spec);
  auto spec = plateau_spec(2.0, 0.5, 8.0);
  spec.target_lane = 8;
  CHECK(error_kind([&] { make_lane_change_scenario(spec); }) == ErrorKind::infeasible_spec);
}

TEST_CASE("initial gap of 12 m against the default thresholds") {
  auto spec = plateau_spec(6.0, 0.5, 7.5);
  spec.initial_gap = 12.0;
  const auto [rec, truth] = make_lane_change_scenario(spec);
  CHECK(truth.x_gap_at_t1 == doctest::Approx(12.0));
  CHECK(truth.center_gap_at_t1 == doctest::Approx(16.5));
  REQUIRE(truth.expected.size() == 5);
  CHECK(truth.expected[0] == Label::other);
  for (std::size_t i = 1; i < 5; ++i) CHECK(truth.expected[i] == Label::cut_in);
  CHECK(truth.tfv_id == kTfvId);
}

TEST_CASE("emitted accelerations are forward differences of the velocities") {
  auto spec = random_scenario_spec(17, ProfileKind::ramp);
  spec.lcv_burst = {3.0, 2.0, 0.7};
  const auto [rec, truth] = make_lane_change_scenario(spec);
  for (const auto& [id, t] : rec.tracks) {
    for (std::size_t k = 0; k + 1 < t.states.size(); ++k) {
      CHECK(t.states[k].ax * rec.dt == doctest::Approx(t.states[k + 1].vx - t.states[k].vx).epsilon(1e-9));
    }
  }
}

TEST_CASE("scenario_gap_at matches the emitted positions") {
  const auto spec = random_scenario_spec(23, ProfileKind::plateau);
  const auto [rec, truth] = make_lane_change_scenario(spec);
  const auto& lcv = rec.track(kLcvId);
  const auto& tfv = rec.track(kTfvId);
  for (Frame f = 0; f <= lcv.last_frame(); f += 37) {
    const double center = lcv.at(f).x - tfv.at(f).x;
    CHECK(scenario_gap_at(spec, f, GapMode::center_distance) == doctest::Approx(center).epsilon(1e-12));
  }
}

TEST_CASE("composite weave yields two maneuvers") {
  const LateralProfile parts[] = {LateralProfile::plateau(5.0, 0.5, 7.0), LateralProfile::plateau(15.0, -0.5, 7.0)};
  ScenarioSpec spec;
  spec.duration = 30.0;
  spec.lateral = LateralProfile::composite(parts);
  const auto [rec, truth] = make_lane_change_scenario(spec);
  REQUIRE(truth.maneuvers.size() == 2);
  CHECK(truth.maneuvers[0].from_lane == 6);
  CHECK(truth.maneuvers[0].to_lane == 7);
  CHECK(truth.maneuvers[1].from_lane == 7);
  CHECK(truth.maneuvers[1].to_lane == 6);
  CHECK(truth.maneuvers[0].t2 == 219);  // 5 + 1.875 / 0.5 = 8.75 s
  CHECK(truth.maneuvers[1].t2 == 457);  // 15 + (3.5 - 1.875) / 0.5 = 18.25 s
}

TEST_CASE("null scenarios have no lane transitions") {
  for (const auto& speeds : {std::vector<double>{30, 28}, std::vector<double>{25},
                             std::vector<double>{20, 22, 24, 26, 28, 30, 32, 34, 36, 38}}) {
    const auto r = make_null_scenario(60.0, speeds);
    CHECK(r.tracks.size() == speeds.size());
    for (const auto& [id, t] : r.tracks) CHECK(find_lane_transitions(t).empty());
    CHECK(extract_events(r, {}).events.empty());
  }
  CHECK_THROWS_AS(make_null_scenario(0.0, std::vector<double>{30}), Error);
}

TEST_CASE("highD writer round-trips through the loader") {
  TempDir dir("synth_rt");
  auto spec = random_scenario_spec(31, ProfileKind::ramp);
  spec.background.push_back({8, 40.0, 27.0, std::nullopt, 0, 12.0});
  const auto [rec, truth] = make_lane_change_scenario(spec);
  REQUIRE(rec.tracks.size() == 3);
  const auto files = write_highd_files(rec, dir.path());
  const auto back = load_recording(files.tracks, files.meta, {}, nullptr, files.tracks_meta);
  CHECK(back.recording_id == rec.recording_id);
  CHECK(back.dt == doctest::Approx(rec.dt).epsilon(1e-12));
  CHECK(back.layout == rec.layout);
  REQUIRE(back.tracks.size() == rec.tracks.size());
  for (const auto& [id, t] : rec.tracks) {
    const auto& b = back.track(id);
    CHECK(b.length == doctest::Approx(t.length).epsilon(1e-6));
    CHECK(b.width == doctest::Approx(t.width).epsilon(1e-6));
    REQUIRE(b.states.size() == t.states.size());
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      const auto& s = t.states[i];
      const auto& q = b.states[i];
      CHECK(q.frame == s.frame);
      CHECK(q.lane_id == s.lane_id);
      CHECK(std::abs(q.x - s.x) <= 1e-6);
      CHECK(std::abs(q.y - s.y) <= 1e-6);
      CHECK(std::abs(q.vx - s.vx) <= 1e-6);
      CHECK(std::abs(q.vy_raw - s.vy_raw) <= 1e-6);
      CHECK(std::abs(q.ax - s.ax) <= 1e-6);
    }
  }
}

TEST_CASE("upper carriageway scenarios round-trip too") {
  TempDir dir("synth_upper");
  auto spec = random_scenario_spec(1, ProfileKind::plateau);
  spec.origin_lane = 3;
  spec.target_lane = 2;
  const auto [rec, truth] = make_lane_change_scenario(spec);
  const auto files = write_highd_files(rec, dir.path());
  const auto back = load_recording(files.tracks, files.meta);
  const auto& a = rec.track(kLcvId);
  const auto& b = back.track(kLcvId);
  for (std::size_t i = 0; i < a.states.size(); i += 50) {
    CHECK(std::abs(a.states[i].x - b.states[i].x) <= 1e-6);
    CHECK(std::abs(a.states[i].vx - b.states[i].vx) <= 1e-6);
  }
}

TEST_CASE("a corrupted row is flagged by the loader") {
  TempDir dir("synth_corrupt");
  const auto [rec, truth] = make_lane_change_scenario(random_scenario_spec(2, ProfileKind::ramp));
  const auto files = write_highd_files(rec, dir.path());
  auto text = testing::read_text(files.tracks);
  // Replace the lane id on the second data row with an undeclared one.
  auto line_start = text.find('\n', text.find('\n') + 1) + 1;
  auto line_end = text.find('\n', line_start);
  auto comma = text.rfind(',', line_end);
  text.replace(comma + 1, line_end - comma - 1, "5");
  testing::write_text(files.tracks, text);
  CHECK(error_kind([&] { load_recording(files.tracks, files.meta); }) == ErrorKind::unknown_lane_id);
}

TEST_CASE("an empty recording fails to load") {
  TempDir dir("synth_empty");
  const Recording r = Recording::with_layout(4, 0.04, default_layout());
  const auto files = write_highd_files(r, dir.path());
  CHECK(error_kind([&] { load_recording(files.tracks, files.meta); }) == ErrorKind::empty_recording);
}

TEST_CASE("generation is deterministic per seed") {
  for (const auto kind : {ProfileKind::ramp, ProfileKind::plateau, ProfileKind::composite}) {
    const auto a = make_lane_change_scenario(random_scenario_spec(99, kind));
    const auto b = make_lane_change_scenario(random_scenario_spec(99, kind));
    CHECK(a.first == b.first);
    CHECK(serialize_recording(a.first) == serialize_recording(b.first));
  }
}

TEST_CASE("synthetic corpus respects the gap bands") {
  const auto corpus = make_synthetic_corpus({6, 6, 3});
  REQUIRE(corpus.size() == 12);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& t = corpus[i].truth;
    REQUIRE(t.first().feasible());
    if (i < 6) {
      CHECK(t.x_gap_at_t1 >= 2.0 - 1e-9);
      CHECK(t.x_gap_at_t1 < 8.0 + 1e-9);
    } else {
      CHECK(t.x_gap_at_t1 >= 35.0 - 1e-9);
      CHECK(t.x_gap_at_t1 < 60.0 + 1e-9);
    }
    CHECK(corpus[i].recording.recording_id == static_cast<int>(i + 1));
  }
  const auto again = make_synthetic_corpus({6, 6, 3});
  for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i].recording == again[i].recording);
}
