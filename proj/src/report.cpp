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

#include "coorbit/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <cctype>

#include "coorbit/errors.hpp"

namespace coorbit {

using nlohmann::json;

Metric measured(std::string name, double value) {
  Metric m;
  m.name = std::move(name);
  m.value = value;
  return m;
}

Metric at_most(std::string name, double value, double bound) {
  Metric m = measured(std::move(name), value);
  m.bound = bound;
  m.relation = "<=";
  m.pass = value <= bound;
  return m;
}

Metric at_least(std::string name, double value, double bound) {
  Metric m = measured(std::move(name), value);
  m.bound = bound;
  m.relation = ">=";
  m.pass = value >= bound;
  return m;
}

Metric within(std::string name, double value, double reference, double tolerance) {
  Metric m = measured(std::move(name), value);
  m.bound = reference;
  m.relation = "within";
  m.tolerance = tolerance;
  m.pass = std::abs(value - reference) <= tolerance;
  return m;
}

Metric flag(std::string name, bool ok) {
  Metric m = measured(std::move(name), ok ? 1.0 : 0.0);
  m.pass = ok;
  return m;
}

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw IoError("unexpected number string '" + s + "'");
  }
  return j.get<double>();
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? number_to_json(*v) : json(nullptr); }
json optional_bool(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number_from_json(j.at(key));
}

std::optional<bool> read_optional_bool(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<bool>();
}

std::string stem_of(const std::string& command) {
  std::string s = command;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s.empty() ? "report" : s;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& m : metrics)
    if (m.pass && !*m.pass) return false;
  for (const auto& c : curves)
    for (const auto& p : c.points)
      if (p.pass && !*p.pass) return false;
  return true;
}

const Metric* Report::find(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return &m;
  return nullptr;
}

json Report::to_json() const {
  json ms = json::array();
  for (const auto& m : metrics) {
    json e = {{"name", m.name}, {"value", number_to_json(m.value)}, {"bound", optional_number(m.bound)},
              {"pass", optional_bool(m.pass)}};
    if (!m.relation.empty()) e["relation"] = m.relation;
    if (m.relation == "within") e["tolerance"] = number_to_json(m.tolerance);
    ms.push_back(std::move(e));
  }
  json cs = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& p : c.points)
      pts.push_back({{"parameter", number_to_json(p.parameter)}, {"value", number_to_json(p.value)},
                     {"bound", optional_number(p.bound)}, {"pass", optional_bool(p.pass)}});
    cs.push_back({{"name", c.name}, {"points", std::move(pts)}});
  }
  return {{"command", command}, {"parameters", parameters}, {"metrics", std::move(ms)},
          {"curves", std::move(cs)}, {"artifacts", artifacts}, {"version", version},
          {"seed", seed}, {"all_pass", all_pass()}};
}

Report Report::from_json(const json& j) {
  try {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.parameters = j.value("parameters", json::object());
    for (const auto& e : j.at("metrics")) {
      Metric m;
      m.name = e.at("name").get<std::string>();
      m.value = number_from_json(e.at("value"));
      m.bound = read_optional_number(e, "bound");
      m.relation = e.value("relation", std::string());
      if (e.contains("tolerance")) m.tolerance = number_from_json(e.at("tolerance"));
      m.pass = read_optional_bool(e, "pass");
      r.metrics.push_back(std::move(m));
    }
    for (const auto& e : j.value("curves", json::array())) {
      Curve c;
      c.name = e.at("name").get<std::string>();
      for (const auto& p : e.at("points"))
        c.points.push_back({number_from_json(p.at("parameter")), number_from_json(p.at("value")),
                            read_optional_number(p, "bound"), read_optional_bool(p, "pass")});
      r.curves.push_back(std::move(c));
    }
    r.artifacts = j.value("artifacts", std::vector<std::string>{});
    r.version = j.value("version", std::string(kVersion));
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

Report emit_report(Report report, const std::string& dir, ReportFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const std::string stem = stem_of(report.command);
  const bool csv = format != ReportFormat::json;
  const bool js = format != ReportFormat::csv;

  if (csv) {
    for (const auto& c : report.curves) {
      const std::string name = stem + "_" + stem_of(c.name) + ".csv";
      const fs::path path = fs::path(dir) / name;
      std::ofstream out(path);
      if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
      out << "parameter,value,bound,pass\n";
      for (const auto& p : c.points)
        out << csv_number(p.parameter) << ',' << csv_number(p.value) << ','
            << (p.bound ? csv_number(*p.bound) : std::string()) << ','
            << (p.pass ? (*p.pass ? "true" : "false") : "") << '\n';
      if (!out) throw IoError("write failed for '" + path.string() + "'");
      report.artifacts.push_back(name);
    }
  }
  if (js) {
    const fs::path path = fs::path(dir) / (stem + ".json");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << report.to_json().dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  return report;
}

}  // namespace coorbit
