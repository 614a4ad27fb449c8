# Copyright 2026 The cutin-analysis Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Lane-change extraction, cut-in classification and rank-sum statistics."""

from ._cutin import (
    CutinError,
    DetectionParams,
    Recording,
    WindowSpec,
    default_windows,
    extract_events,
    lane_change_scenario,
    load_recording,
    metric_vector,
    p_value,
    run_pipeline,
    seconds_to_frames,
    summarize,
    u_null_counts,
    window_to_frames,
)

__all__ = [
    "CutinError",
    "DetectionParams",
    "Recording",
    "WindowSpec",
    "default_windows",
    "extract_events",
    "lane_change_scenario",
    "load_recording",
    "metric_vector",
    "p_value",
    "run_pipeline",
    "seconds_to_frames",
    "summarize",
    "u_null_counts",
    "window_to_frames",
]
