// Copyright 2026 The catsize Authors
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

/**
 * @file
 * JSON result envelope and serializers for library results.
 *
 * Objects keep insertion order, so the field order is fixed by the code
 * below. Doubles are printed as the shortest decimal that round-trips;
 * non-finite values become null.
 */

#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "catsize/measures.hpp"
#include "catsize/phase_space.hpp"
#include "catsize/simulate.hpp"
#include "catsize/verify.hpp"

#ifndef CATSIZE_VERSION
#define CATSIZE_VERSION "0.0.0"
#endif

namespace catsize {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = CATSIZE_VERSION;

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

inline Json to_json(const CatStateSpec& s) {
  Json j{{"family", to_string(s.family)}, {"modes", s.modes}, {"alpha", to_json(s.alpha)}};
  if (s.aux) j["aux"] = to_json(*s.aux);
  return j;
}

inline Json to_json(const DiagnosticValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::map<std::string, double>>) {
          Json o = Json::object();
          for (const auto& [k, val] : x) o[k] = val;
          return o;
        } else {
          return Json(x);
        }
      },
      v);
}

inline Json to_json(const MeasureResult& r) {
  Json params = Json::object();
  if (r.params.delta) params["delta"] = *r.params.delta;
  if (r.params.lambda) params["lambda"] = *r.params.lambda;
  if (r.params.generator_family) params["generator_family"] = to_string(*r.params.generator_family);
  if (r.params.phi) params["phi"] = *r.params.phi;
  Json diag = Json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = to_json(v);
  return Json{{"measure", to_string(r.measure)}, {"value", r.value},
              {"method", to_string(r.method)},   {"state", to_json(r.state)},
              {"params", params},                {"diagnostics", diag}};
}

inline Json to_json(const TrajectoryStats& s) {
  Json hist = Json::object();
  for (const auto& [k, c] : s.histogram) hist[k] = c;
  return Json{{"trials", s.trials},       {"histogram", hist},  {"mean", s.mean},
              {"variance", s.variance},   {"std_error", s.std_error},
              {"seed", s.seed},           {"seed_scheme", s.seed_scheme}};
}

inline Json to_json(const PhaseSpaceFeatures& f) {
  Json locs = Json::array(), vals = Json::array();
  for (const auto& p : f.peaks) {
    locs.push_back(to_json(p.location));
    vals.push_back(p.value);
  }
  Json j{{"peak_locations", locs},
         {"peak_values", vals},
         {"fringe_wavelength", f.fringe_wavelength ? Json(*f.fringe_wavelength) : Json(nullptr)},
         {"fringe_axis", f.fringe_axis},
         {"peak_separation", f.peak_separation},
         {"lobe_fit_used", f.lobe_fit_used},
         {"lobe_fit_residual", f.lobe_fit_residual}};
  return j;
}

inline Json to_json(const GridAxis& a) {
  return Json{{"label", a.label},
              {"min", a.min},
              {"max", a.max},
              {"steps", a.steps},
              {"direction", to_json(a.direction)}};
}

inline Json to_json(const Check& c) {
  Json j{{"name", c.name},
         {"status", to_string(c.status)},
         {"observed", c.observed},
         {"expected", c.expected},
         {"tolerance", c.tolerance}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

/// Grid file in JSON form: slice description, convention, axes and values.
inline Json grid_to_json(const WignerGrid& g, const Json& slice_spec) {
  Json axes = Json::array();
  for (const auto& a : g.axes) axes.push_back(to_json(a));
  return Json{{"slice_spec", slice_spec}, {"convention", g.convention}, {"modes", g.modes},
              {"origin", to_json(g.origin)}, {"axes", axes},         {"values", g.values}};
}

/// Envelope under construction. Fields are emitted in the fixed order
/// tool_version, command, inputs, results, checks, timing_ms.
class Envelope {
 public:
  explicit Envelope(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  Json& inputs() { return inputs_; }
  Json& results() { return results_; }
  void add_check(const Check& c) { checks_.push_back(c); }
  const std::vector<Check>& checks() const { return checks_; }

  bool all_passed() const {
    for (const auto& c : checks_) {
      if (c.status == CheckStatus::kFail) return false;
    }
    return true;
  }

  Json finish() const {
    Json checks = Json::array();
    for (const auto& c : checks_) checks.push_back(to_json(c));
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    return Json{{"tool_version", kToolVersion}, {"command", command_},
                {"inputs", inputs_},            {"results", results_},
                {"checks", checks},             {"timing_ms", static_cast<std::int64_t>(elapsed.count())}};
  }

 private:
  std::string command_;
  Json inputs_ = Json::object();
  Json results_ = Json::object();
  std::vector<Check> checks_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace catsize
