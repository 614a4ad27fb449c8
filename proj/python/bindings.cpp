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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cutin/error.hpp"
#include "cutin/highd_ingest.hpp"
#include "cutin/metrics.hpp"
#include "cutin/pipeline.hpp"
#include "cutin/rank_stats.hpp"
#include "cutin/report.hpp"
#include "cutin/synth.hpp"

namespace py = pybind11;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

cutin::WindowSeries series(const py::array_t<double, py::array::c_style | py::array::forcecast>& vx,
                           const py::array_t<double, py::array::c_style | py::array::forcecast>& ax, double dt) {
  return {to_vector(vx), to_vector(ax), dt};
}

cutin::PValueMode mode_from(const std::string& s) {
  if (s == "auto") return cutin::PValueMode::automatic;
  if (s == "exact") return cutin::PValueMode::exact;
  if (s == "normal") return cutin::PValueMode::normal;
  throw py::value_error("mode must be 'auto', 'exact' or 'normal'");
}

py::dict event_dict(const cutin::LaneChangeEvent& e) {
  py::dict d;
  d["recording_id"] = e.recording_id;
  d["lcv_id"] = e.lcv_id;
  d["t1"] = e.t1;
  d["t2"] = e.t2;
  d["t3"] = e.t3;
  d["origin_lane"] = e.origin_lane;
  d["target_lane"] = e.target_lane;
  d["tfv_id"] = e.tfv_id;
  d["x_gap_at_t1"] = e.x_gap_at_t1;
  return d;
}

py::dict track_arrays(const cutin::VehicleTrack& t) {
  const auto n = static_cast<py::ssize_t>(t.states.size());
  py::array_t<std::int64_t> frame(n), lane(n);
  py::array_t<double> x(n), y(n), vx(n), vy(n), ax(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& s = t.states[static_cast<std::size_t>(i)];
    frame.mutable_at(i) = s.frame;
    lane.mutable_at(i) = s.lane_id;
    x.mutable_at(i) = s.x;
    y.mutable_at(i) = s.y;
    vx.mutable_at(i) = s.vx;
    vy.mutable_at(i) = s.vy_raw;
    ax.mutable_at(i) = s.ax;
  }
  py::dict d;
  d["frame"] = frame;
  d["x"] = x;
  d["y"] = y;
  d["vx"] = vx;
  d["vy_raw"] = vy;
  d["ax"] = ax;
  d["lane_id"] = lane;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cutin, m) {
  m.doc() = "Lane-change extraction, cut-in classification and rank-sum statistics";

  static py::exception<cutin::Error> error(m, "CutinError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const cutin::Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), std::string(cutin::to_string(e.kind()))).ptr());
    }
  });

  py::class_<cutin::DetectionParams>(m, "DetectionParams")
      .def(py::init<>())
      .def_readwrite("v_s", &cutin::DetectionParams::v_s)
      .def_readwrite("tau_s", &cutin::DetectionParams::tau_s)
      .def_readwrite("v_e", &cutin::DetectionParams::v_e)
      .def_readwrite("tau_e", &cutin::DetectionParams::tau_e)
      .def_readwrite("min_speed", &cutin::DetectionParams::min_speed)
      .def_readwrite("gap_thresholds", &cutin::DetectionParams::gap_thresholds)
      .def_property(
          "gap_mode", [](const cutin::DetectionParams& p) { return std::string(cutin::to_string(p.gap_mode)); },
          [](cutin::DetectionParams& p, const std::string& s) { p.gap_mode = cutin::gap_mode_from_string(s); })
      .def("validate", &cutin::DetectionParams::validate);

  py::class_<cutin::WindowSpec>(m, "WindowSpec")
      .def_static("from_key", &cutin::WindowSpec::from_key)
      .def_property_readonly("anchor", [](const cutin::WindowSpec& w) { return std::string(cutin::to_string(w.anchor)); })
      .def_readonly("start_offset", &cutin::WindowSpec::start_offset)
      .def_readonly("end_offset", &cutin::WindowSpec::end_offset)
      .def("label", &cutin::WindowSpec::label)
      .def("key", &cutin::WindowSpec::key)
      .def("__repr__", &cutin::WindowSpec::label);

  m.def("default_windows", &cutin::default_windows);
  m.def("seconds_to_frames", &cutin::seconds_to_frames, py::arg("seconds"), py::arg("dt"));
  m.def(
      "window_to_frames",
      [](const cutin::WindowSpec& w, cutin::Frame anchor, double dt) {
        const auto r = cutin::window_to_frames(w, anchor, dt);
        return py::make_tuple(r.start, r.end);
      },
      py::arg("window"), py::arg("anchor_frame"), py::arg("dt"));

  py::class_<cutin::Recording>(m, "Recording")
      .def_readonly("recording_id", &cutin::Recording::recording_id)
      .def_readonly("dt", &cutin::Recording::dt)
      .def("vehicle_ids",
           [](const cutin::Recording& r) {
             std::vector<cutin::VehicleId> ids;
             for (const auto& [id, t] : r.tracks) ids.push_back(id);
             return ids;
           })
      .def("track", [](const cutin::Recording& r, cutin::VehicleId id) { return track_arrays(r.track(id)); })
      .def("serialize", &cutin::serialize_recording)
      .def_static("deserialize", &cutin::deserialize_recording)
      .def("__len__", [](const cutin::Recording& r) { return r.tracks.size(); });

  m.def(
      "load_recording",
      [](const std::filesystem::path& tracks, const std::filesystem::path& meta) {
        return cutin::load_recording(tracks, meta);
      },
      py::arg("tracks_file"), py::arg("meta_file"));

  m.def(
      "extract_events",
      [](const cutin::Recording& r, const cutin::DetectionParams& p) {
        const auto detected = cutin::extract_events(r, p);
        const auto filtered = cutin::attach_and_filter(detected.events, r, p, cutin::default_windows());
        py::list out;
        for (const auto& e : filtered.kept) out.append(event_dict(e));
        return out;
      },
      py::arg("recording"), py::arg("params") = cutin::DetectionParams{},
      "Detected lane changes that pass every exclusion rule, with TFV and X-gap attached.");

  m.def(
      "lane_change_scenario",
      [](double start, double velocity, double duration, double initial_gap, std::uint64_t seed) {
        cutin::ScenarioSpec spec;
        spec.lateral = cutin::LateralProfile::plateau(start, velocity, duration);
        spec.initial_gap = initial_gap;
        spec.seed = seed;
        auto [rec, truth] = cutin::make_lane_change_scenario(spec);
        py::dict t;
        const auto& first = truth.first();
        t["t1"] = first.t1;
        t["t2"] = first.t2;
        t["t3"] = first.t3;
        t["x_gap_at_t1"] = truth.x_gap_at_t1;
        return py::make_tuple(std::move(rec), t);
      },
      py::arg("start") = 6.0, py::arg("velocity") = 0.5, py::arg("duration") = 8.0, py::arg("initial_gap") = 20.0,
      py::arg("seed") = 0, "Plateau lane change from lane 6 to lane 7 with its closed-form key frames.");

  m.def(
      "metric_vector",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& vx,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ax, double dt) {
        const auto v = cutin::metric_vector(series(vx, ax, dt));
        py::dict d;
        d["p_a"] = v.p_a;
        d["r_v"] = v.r_v;
        d["dv"] = v.dv;
        d["a_max"] = v.a_max;
        d["a_min"] = v.a_min;
        return d;
      },
      py::arg("vx"), py::arg("ax"), py::arg("dt") = 0.04);

  m.def(
      "summarize",
      [](const std::vector<double>& s) {
        const auto r = cutin::summarize(s);
        return py::make_tuple(r.n, r.mean, r.std);
      },
      py::arg("sample"));

  m.def(
      "p_value",
      [](const std::vector<double>& a, const std::vector<double>& b, const std::string& mode) {
        const auto r = cutin::p_value(a, b, mode_from(mode));
        py::dict d;
        d["u"] = r.u_statistic;
        d["rank_sum"] = r.rank_sum;
        d["z"] = r.z_value;
        d["p"] = r.p_two_sided;
        d["method"] = std::string(cutin::to_string(r.method));
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("mode") = "auto");

  m.def("u_null_counts", &cutin::u_null_counts, py::arg("n_a"), py::arg("n_b"));

  m.def(
      "run_pipeline",
      [](const std::string& config_text, const std::optional<std::filesystem::path>& output_dir) {
        const auto cfg = cutin::parse_config(config_text);
        cutin::ReportBundle b;
        {
          py::gil_scoped_release release;
          b = cutin::run_pipeline(cfg);
          if (output_dir) cutin::write_report(b, *output_dir, {cfg.write_csv, cfg.write_markdown, true});
        }
        py::dict out;
        out["thresholds"] = b.thresholds;
        out["cut_in"] = b.table1.cut_in;
        out["other"] = b.table1.other;
        out["transitions"] = b.audit.transitions;
        out["kept"] = b.audit.kept;
        out["drops"] = b.audit.by_reason;
        out["events_csv"] = cutin::emit_events_csv(b);
        return out;
      },
      py::arg("config_text"), py::arg("output_dir") = py::none(),
      "Runs the pipeline from a flat key = value config; writes files when output_dir is given.");
}
