// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace coorbit {

inline constexpr const char* kVersion = "0.1.0";

/// A measured value with an optional bound. relation is "<=", ">=" or "within";
/// tolerance only matters for "within".
struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<double> bound;
  std::string relation;
  double tolerance = 0.0;
  std::optional<bool> pass;

  bool operator==(const Metric&) const = default;
};

/// Recorded value without a bound.
Metric measured(std::string name, double value);
/// value <= bound
Metric at_most(std::string name, double value, double bound);
/// value >= bound
Metric at_least(std::string name, double value, double bound);
/// |value - reference| <= tolerance
Metric within(std::string name, double value, double reference, double tolerance);
/// Boolean check stored as 0/1.
Metric flag(std::string name, bool ok);

struct CurvePoint {
  double parameter = 0.0;
  double value = 0.0;
  std::optional<double> bound;
  std::optional<bool> pass;

  bool operator==(const CurvePoint&) const = default;
};

struct Curve {
  std::string name;
  std::vector<CurvePoint> points;

  bool operator==(const Curve&) const = default;
};

struct Report {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Metric> metrics;
  std::vector<Curve> curves;
  std::vector<std::string> artifacts;
  std::string version = kVersion;
  std::uint64_t seed = 0;

  /// True when every pass flag in metrics and curves is true.
  bool all_pass() const;
  const Metric* find(const std::string& name) const;

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);

  bool operator==(const Report&) const = default;
};

enum class ReportFormat { json, csv, both };

/// Writes <dir>/<stem>.json and/or one <dir>/<stem>_<curve>.csv per curve
/// (columns parameter, value, bound, pass). Artifact file names are added to the
/// report before the JSON is written. Throws IoError with the offending path.
Report emit_report(Report report, const std::string& dir, ReportFormat format = ReportFormat::both);

/// Numbers that JSON cannot carry (inf, nan) are stored as strings.
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

}  // namespace coorbit
