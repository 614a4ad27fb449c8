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

#include "cutin/error.hpp"
#include "cutin/highd_ingest.hpp"
#include "cutin/synth.hpp"
#include "fixtures.hpp"

using namespace cutin;
using cutin::testing::TempDir;
using cutin::testing::write_text;

namespace {

constexpr const char* kHeader = "frame,id,x,y,width,height,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n";
constexpr const char* kMeta =
    "id,frameRate,upperLaneMarkings,lowerLaneMarkings\n"
    "7,25,8.0;11.75;15.5;19.25,23.0;26.75;30.5;34.25\n";

ErrorKind load_error_kind(const std::filesystem::path& tracks, const std::filesystem::path& meta,
                          const ColumnMap& cols = {}) {
  try {
    (void)load_recording(tracks, meta, cols);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io_error;
}

}  // namespace

TEST_CASE("a minimal well-formed recording") {
  TempDir dir("ingest_min");
  write_text(dir / "t.csv", std::string(kHeader) +
                                "0,1,10,24,4,2,30,0.1,0.5,0,6\n"
                                "1,1,11.2,24,4,2,30,0.1,0.5,0,6\n"
                                "2,1,12.4,24,4,2,30,0.1,0.5,0,6\n");
  write_text(dir / "m.csv", kMeta);
  IngestReport report;
  const auto r = load_recording(dir / "t.csv", dir / "m.csv", {}, &report);
  CHECK(r.recording_id == 7);
  CHECK(r.dt == doctest::Approx(0.04).epsilon(1e-15));
  REQUIRE(r.tracks.size() == 1);
  const auto& t = r.track(1);
  CHECK(t.states.size() == 3);
  CHECK(report.rows_rejected == 0);
  CHECK(report.tracks_loaded == 1);
  // Corner to center.
  CHECK(t.states[0].x == doctest::Approx(12.0));
  CHECK(t.states[0].y == doctest::Approx(25.0));
  CHECK(t.length == 4.0);
  CHECK(t.width == 2.0);
  CHECK(t.states[0].vy_raw == 0.1);
  CHECK(t.states[0].lane_id == 6);
}

TEST_CASE("upper carriageway is flipped into the travel direction") {
  TempDir dir("ingest_upper");
  write_text(dir / "t.csv", std::string(kHeader) +
                                "5,3,300,10,4,2,-28.5,0.2,-0.3,0,2\n"
                                "6,3,298.86,10,4,2,-28.6,0.2,0.4,0,2\n");
  write_text(dir / "m.csv", kMeta);
  const auto r = load_recording(dir / "t.csv", dir / "m.csv");
  const auto& t = r.track(3);
  CHECK(t.states[0].vx == 28.5);
  CHECK(t.states[1].vx == 28.6);
  CHECK(t.states[0].ax == 0.3);
  CHECK(t.states[1].ax == -0.4);
  CHECK(t.states[0].x == doctest::Approx(-302.0));
  CHECK(t.states[1].x > t.states[0].x);
  CHECK(t.states[0].vy_raw == 0.2);
  CHECK(r.direction_of(2) == -1);
}

TEST_CASE("sign normalization never changes speed magnitudes") {
  TempDir dir("ingest_mag");
  const auto [rec, truth] = make_lane_change_scenario(random_scenario_spec(3, ProfileKind::ramp));
  const auto files = write_highd_files(rec, dir.path());
  const auto back = load_recording(files.tracks, files.meta, {}, nullptr, files.tracks_meta);
  for (const auto& [id, t] : back.tracks) {
    const auto& orig = rec.track(id);
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      CHECK(std::abs(std::abs(t.states[i].vx) - std::abs(orig.states[i].vx)) <= 1e-9);
    }
  }
}

TEST_CASE("missing lane-id column") {
  TempDir dir("ingest_missing");
  write_text(dir / "t.csv", "frame,id,x,y,width,height,xVelocity,yVelocity,xAcceleration\n0,1,1,24,4,2,30,0,0\n");
  write_text(dir / "m.csv", kMeta);
  CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::missing_column);
}

TEST_CASE("structural errors") {
  TempDir dir("ingest_struct");
  write_text(dir / "m.csv", kMeta);

  SUBCASE("frame gap") {
    write_text(dir / "t.csv", std::string(kHeader) + "0,1,10,24,4,2,30,0,0,0,6\n2,1,12,24,4,2,30,0,0,0,6\n");
    CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::non_contiguous_frames);
  }
  SUBCASE("undeclared lane") {
    write_text(dir / "t.csv", std::string(kHeader) + "0,1,10,24,4,2,30,0,0,0,5\n");
    CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::unknown_lane_id);
  }
  SUBCASE("header only") {
    write_text(dir / "t.csv", kHeader);
    CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::empty_recording);
  }
  SUBCASE("truncated row") {
    write_text(dir / "t.csv", std::string(kHeader) + "0,1,10,24,4,2,30,0,0,0,6\n1,1,11,24,4");
    CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::parse_error);
  }
}

TEST_CASE("blank kinematic fields reject the row, not the file") {
  TempDir dir("ingest_blank");
  write_text(dir / "m.csv", kMeta);
  write_text(dir / "t.csv", std::string(kHeader) +
                                "0,1,10,24,4,2,30,0,0,0,6\n"
                                "1,1,11,24,4,2,30,0,0,0,6\n"
                                "2,1,12,24,4,2,,0,0,0,6\n"
                                "0,2,50,28,4,2,30,0,0,0,7\n"
                                "1,2,51,28,4,2,30,nan,0,0,7\n"
                                "2,2,52,28,4,2,30,0,0,0,7\n");
  IngestReport report;
  const auto r = load_recording(dir / "t.csv", dir / "m.csv", {}, &report);
  CHECK(report.rows_rejected == 2);
  REQUIRE(report.rejections.size() == 2);
  CHECK(report.rejections[0].line == 4);
  CHECK(report.rejections[1].line == 6);
  // Vehicle 1 loses its last row only; vehicle 2 would have a hole and is dropped.
  REQUIRE(r.tracks.size() == 1);
  CHECK(r.track(1).states.size() == 2);
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("header remapping") {
  TempDir dir("ingest_remap");
  write_text(dir / "m.csv", kMeta);
  write_text(dir / "t.csv",
             "f,vid,x,y,width,height,vx,vy,ax,lane\n0,1,10,24,4,2,30,0,0,6\n1,1,11.2,24,4,2,30,0,0,6\n");
  ColumnMap cols;
  cols.set("frame", "f");
  cols.set("id", "vid");
  cols.set("x_velocity", "vx");
  cols.set("y_velocity", "vy");
  cols.set("x_acceleration", "ax");
  cols.set("lane_id", "lane");
  const auto r = load_recording(dir / "t.csv", dir / "m.csv", cols);
  CHECK(r.track(1).states.size() == 2);
  CHECK(load_error_kind(dir / "t.csv", dir / "m.csv") == ErrorKind::missing_column);
  CHECK_THROWS_AS(cols.set("nonsense", "x"), Error);
}

TEST_CASE("identical bytes give identical recordings") {
  TempDir dir("ingest_det");
  const auto [rec, truth] = make_lane_change_scenario(random_scenario_spec(9, ProfileKind::plateau));
  const auto files = write_highd_files(rec, dir.path());
  CHECK(load_recording(files.tracks, files.meta) == load_recording(files.tracks, files.meta));
}

TEST_CASE("load_corpus") {
  SUBCASE("empty directory") {
    TempDir dir("corpus_empty");
    const auto [recs, report] = load_corpus(dir.path());
    CHECK(recs.empty());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0] == "no recordings found");
  }
  SUBCASE("two valid pairs") {
    TempDir dir("corpus_two");
    for (int id : {1, 2}) {
      auto spec = random_scenario_spec(static_cast<std::uint64_t>(id), ProfileKind::ramp);
      spec.recording_id = id;
      write_highd_files(make_lane_change_scenario(spec).first, dir.path());
    }
    const auto [recs, report] = load_corpus(dir.path());
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].recording_id == 1);
    CHECK(recs[1].recording_id == 2);
    CHECK(report.rows_rejected == 0);
    CHECK(report.failed_files.empty());
  }
  SUBCASE("one valid and one truncated pair") {
    TempDir dir("corpus_corrupt");
    for (int id : {1, 2}) {
      auto spec = random_scenario_spec(static_cast<std::uint64_t>(id), ProfileKind::ramp);
      spec.recording_id = id;
      write_highd_files(make_lane_change_scenario(spec).first, dir.path());
    }
    auto text = testing::read_text(dir / "02_tracks.csv");
    text.resize(text.size() / 2);
    text.resize(text.rfind(',') );
    write_text(dir / "02_tracks.csv", text);
    const auto [recs, report] = load_corpus(dir.path());
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].recording_id == 1);
    REQUIRE(report.failed_files.size() == 1);
    CHECK(report.failed_files[0].file.find("02_tracks.csv") != std::string::npos);
  }
  SUBCASE("unreadable directory") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/cutin/dir"), Error);
  }
  SUBCASE("worker count does not change the result") {
    TempDir dir("corpus_workers");
    for (int id = 1; id <= 6; ++id) {
      auto spec = random_scenario_spec(static_cast<std::uint64_t>(40 + id), ProfileKind::plateau);
      spec.recording_id = id;
      write_highd_files(make_lane_change_scenario(spec).first, dir.path());
    }
    const auto one = load_corpus(dir.path(), {}, 1);
    const auto four = load_corpus(dir.path(), {}, 4);
    CHECK(one.first == four.first);
    CHECK(one.second.recordings_loaded == 6);
  }
}

TEST_CASE("validate_recording") {
  const auto [rec, truth] = make_lane_change_scenario(random_scenario_spec(5, ProfileKind::ramp));
  CHECK(validate_recording(rec).empty());

  SUBCASE("frame gap 10 to 12") {
    auto r = rec;
    auto& states = r.tracks.at(kLcvId).states;
    states.erase(states.begin() + 11);
    const auto v = validate_recording(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ErrorKind::non_contiguous_frames);
    CHECK(v[0].frame == 12);
  }
  SUBCASE("undeclared lane") {
    auto r = rec;
    r.tracks.at(kLcvId).states[3].lane_id = 42;
    const auto v = validate_recording(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ErrorKind::unknown_lane_id);
  }
  SUBCASE("non-positive size") {
    auto r = rec;
    r.tracks.at(kLcvId).length = 0.0;
    CHECK(validate_recording(r).size() == 1);
  }
}
