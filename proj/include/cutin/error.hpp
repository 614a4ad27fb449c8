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

#include <stdexcept>
#include <string>
#include <string_view>

namespace cutin {

enum class ErrorKind {
  missing_column,
  non_contiguous_frames,
  unknown_lane_id,
  empty_recording,
  parse_error,
  directory_unreadable,
  io_error,
  infeasible_spec,
  frame_out_of_range,
  vehicle_missing_at_frame,
  window_off_track,
  non_positive_min_velocity,
  empty_sample,
  exact_with_ties,
  config_invalid,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. The kind is stable and is what
/// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cutin
