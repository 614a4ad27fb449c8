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

// Shared fixtures for the unit tests.

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "cutin/model.hpp"

namespace cutin::testing {

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cutin_" + std::string(tag) + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// One vehicle on lane 6 of the default layout with the given lane ids and
/// lateral velocities; x advances at 30 m/s.
inline Recording single_track(const std::vector<LaneId>& lanes, const std::vector<double>& vy,
                              const LaneLayout& layout) {
  Recording r = Recording::with_layout(1, 0.04, layout);
  VehicleTrack t{1, VehicleClass::car, 4.5, 1.9, {}};
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    VehicleState s;
    s.frame = static_cast<Frame>(k);
    s.x = 30.0 * 0.04 * static_cast<double>(k);
    s.y = r.lane_center(lanes[k]);
    s.vx = 30.0;
    s.vy_raw = k < vy.size() ? vy[k] : 0.0;
    s.lane_id = lanes[k];
    t.states.push_back(s);
  }
  r.tracks.emplace(t.id, std::move(t));
  return r;
}

}  // namespace cutin::testing
