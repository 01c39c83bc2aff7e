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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "coorbit/errors.hpp"
#include "coorbit/experiments.hpp"

using namespace coorbit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coorbit_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string s; std::getline(in, s);) out.push_back(s);
  return out;
}

double value_of(const Report& r, const std::string& name) {
  const Metric* m = r.find(name);
  REQUIRE(m != nullptr);
  return m->value;
}

Report sample_report() {
  Report r;
  r.command = "sample run";
  r.parameters = {{"N", 4}, {"list", {1, 2}}};
  r.metrics = {at_most("a", 0.5, 1.0), at_least("b", 2.0, 1.0), within("c", 1.0, 1.1, 0.2), flag("d", true),
               measured("e", std::numeric_limits<double>::infinity())};
  r.curves = {{"curve one", {{1.0, 2.0, 3.0, true}, {2.0, 4.0, std::nullopt, std::nullopt}}}};
  r.seed = 9;
  return r;
}

}  // namespace

TEST_CASE("metric helpers") {
  CHECK(*at_most("x", 1.0, 1.0).pass);
  CHECK_FALSE(*at_most("x", 1.1, 1.0).pass);
  CHECK(*at_least("x", 1.0, 1.0).pass);
  CHECK_FALSE(*at_least("x", 0.9, 1.0).pass);
  CHECK(*within("x", 1.05, 1.0, 0.1).pass);
  CHECK_FALSE(*within("x", 1.2, 1.0, 0.1).pass);
  CHECK_FALSE(measured("x", 3.0).pass.has_value());
  Report r;
  r.metrics.push_back(measured("x", 1.0));
  CHECK(r.all_pass());
  r.metrics.push_back(flag("y", false));
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("report JSON round trip") {
  const Report r = sample_report();
  const json j = r.to_json();
  CHECK(j.at("all_pass").get<bool>());
  CHECK(j.at("metrics").at(4).at("value") == "inf");
  CHECK(Report::from_json(j) == r);
  CHECK(Report::from_json(json::parse(j.dump(2))) == r);

  Report empty;
  empty.command = "empty";
  const json e = empty.to_json();
  CHECK(e.at("metrics").is_array());
  CHECK(e.at("metrics").empty());
  CHECK(Report::from_json(e) == empty);

  CHECK_THROWS_AS(Report::from_json(json{{"metrics", json::array()}}), IoError);
  CHECK_THROWS_AS(Report::from_json(json{{"command", "x"}, {"metrics", {{{"name", "a"}, {"value", "many"}}}}}), IoError);
}

TEST_CASE("emit_report writes JSON and one CSV per curve") {
  const fs::path dir = scratch("emit");
  const Report out = emit_report(sample_report(), dir.string(), ReportFormat::both);
  REQUIRE(out.artifacts.size() == 1);
  CHECK(out.artifacts[0] == "sample_run_curve_one.csv");
  const auto rows = lines_of(dir / out.artifacts[0]);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "parameter,value,bound,pass");
  CHECK(rows[1] == "1,2,3,true");
  CHECK(rows[2] == "2,4,,");
  const Report back = Report::from_json(json::parse(slurp(dir / "sample_run.json")));
  CHECK(back == out);

  const fs::path only_json = scratch("emit_json");
  CHECK(emit_report(sample_report(), only_json.string(), ReportFormat::json).artifacts.empty());
  CHECK(fs::exists(only_json / "sample_run.json"));
  CHECK_FALSE(fs::exists(only_json / "sample_run_curve_one.csv"));

  const fs::path only_csv = scratch("emit_csv");
  emit_report(sample_report(), only_csv.string(), ReportFormat::csv);
  CHECK_FALSE(fs::exists(only_csv / "sample_run.json"));

  const fs::path blocker = scratch("emit_blocker");
  std::ofstream(blocker.string()) << "x";
  CHECK_THROWS_AS(emit_report(sample_report(), (blocker / "sub").string()), IoError);
  fs::remove_all(dir);
  fs::remove_all(only_json);
  fs::remove_all(only_csv);
  fs::remove(blocker);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(RealLineConfig::from_json({{"step", 0.0}}), InvalidParameter);
  CHECK_THROWS_AS(RealLineConfig::from_json({{"T_list", json::array()}}), InvalidParameter);
  CHECK_THROWS_AS(AffineConfig::from_json({{"alpha", 1.0}}), InvalidParameter);
  CHECK_THROWS_AS(AffineConfig::from_json({{"beta", 1.0}}), InvalidParameter);
  CHECK_THROWS_AS(GaborConfig::from_json({{"N", 8}, {"lattice_steps", {3}}}), InvalidParameter);
  CHECK_THROWS_AS(GaborConfig::from_json({{"p", 1.5}}), InvalidParameter);
  CHECK_THROWS_AS(RieszConfig::from_json({{"N", 8}, {"separation", 3}}), InvalidParameter);
  CHECK_THROWS_AS(InDiagnosticConfig::from_json({{"growth_factor", 0.5}}), InvalidParameter);
  CHECK_THROWS_AS(CoorbitNormConfig::from_json({{"samples", 0}}), InvalidParameter);
  CHECK_THROWS_AS(CoorbitEmbedConfig::from_json({{"lattice_step", 3}}), InvalidParameter);

  const GaborConfig g = GaborConfig::from_json({{"N", 6}, {"lattice_steps", {1, 3}}, {"refinement_blocks", {6, 3, 1}}});
  CHECK(GaborConfig::from_json(g.to_json()).to_json() == g.to_json());
  const AffineConfig a = AffineConfig::from_json({{"B_list", {8.0, 32.0}}});
  CHECK(AffineConfig::from_json(a.to_json()).to_json() == a.to_json());
  const CoorbitEmbedConfig e = CoorbitEmbedConfig::from_json(json::object());
  CHECK(e.to_json().at("y_p").get<double>() == 0.5);
}

TEST_CASE("counterexample on the real line") {
  RealLineConfig c;
  c.t_list = {1.0, 3.0};
  const Report r = run_counterexample_realline(c);
  CHECK(r.all_pass());
  for (double t : {1.0, 3.0}) {
    std::ostringstream tag;
    tag << "[T=" << t << "]";
    // Continuum norm of f is e^{-T}(e - e^{-2}); the convolution norm is e^2 - e - 1/e + e^{-2}.
    CHECK(value_of(r, "norm_f" + tag.str()) <= std::exp(-t) * (std::numbers::e - std::exp(-2.0)) * 1.01);
    CHECK(std::abs(value_of(r, "conv_at_zero" + tag.str()) - 1.0) <= 2.0 * c.step);
  }
  CHECK(value_of(r, "ratio_growth[T=3/T=1]") == doctest::Approx(std::exp(4.0)).epsilon(0.1));

  // The grid value approaches e^2 - e - 1/e + e^{-2} at first order in the step.
  const double conv = std::exp(2.0) - std::numbers::e - std::exp(-1.0) + std::exp(-2.0);
  RealLineConfig fine = c;
  fine.t_list = {1.0};
  fine.step = c.step / 2.0;
  fine.resolution_check = false;
  const double gap = conv - value_of(r, "norm_conv[T=1]");
  const double fine_gap = conv - value_of(run_counterexample_realline(fine), "norm_conv[T=1]");
  CHECK(gap > 0.0);
  CHECK(gap <= 0.02 * conv);
  CHECK(gap / fine_gap == doctest::Approx(2.0).epsilon(0.1));

  RealLineConfig bad;
  bad.t_list = {10.5};
  CHECK_THROWS_AS(run_counterexample_realline(bad), TruncationError);
}

TEST_CASE("counterexample on the affine group") {
  AffineConfig c;
  c.quadrature.log_step = 0.02;
  c.quadrature.z_step = 0.02;
  c.resolution_check = false;
  const Report r = run_counterexample_affine(c);
  CHECK(r.all_pass());
  CHECK(value_of(r, "sup_f") <= 1.0);
  // Closed form at x = 0, a >= 1 for alpha = 2, beta = 1/2.
  for (double a : {1.0, 4.0}) {
    const double exact = std::pow(a, -0.5) / 1.0 + std::pow(a, -0.5) * (1.0 - std::pow(a, -1.5)) / 1.5 +
                         std::pow(a, -2.0) / 4.0;
    std::ostringstream name;
    name << "self_convolution[a=" << a << "]";
    CHECK(value_of(r, name.str()) == doctest::Approx(exact).epsilon(0.02));
  }
  CHECK(value_of(r, "partial_norm_growth") >= 1.8);

  AffineConfig coarse;
  coarse.quadrature.log_step = 0.8;
  coarse.quadrature.z_step = 0.8;
  coarse.a_list = {1.0};
  CHECK_THROWS_AS(run_counterexample_affine(coarse), ResolutionError);
}

TEST_CASE("Gabor frame suite") {
  GaborConfig four;
  four.n = 4;
  four.lattice_steps = {1};
  four.refinement_blocks = {4, 2, 1};
  const Report r4 = run_gabor_suite(four);
  CHECK(r4.all_pass());
  CHECK(value_of(r4, "lower_bound[step=1]") == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(value_of(r4, "upper_bound[step=1]") == doctest::Approx(1.0).epsilon(1e-10));

  const Report r8 = run_gabor_suite(GaborConfig{});
  CHECK(r8.all_pass());
  CHECK(value_of(r8, "reconstruction_error[step=2]") <= 1e-9);
  CHECK(value_of(r8, "neumann_terms[step=2]") > 0.0);
  REQUIRE(r8.curves.size() == 1);
  CHECK(r8.curves[0].points.size() == 4);
}

TEST_CASE("Riesz suite") {
  const Report r = run_riesz_suite(RieszConfig{});
  CHECK(r.all_pass());
  CHECK(value_of(r, "biorthogonality_deviation") <= 1e-9);
  CHECK(value_of(r, "orthonormalization_deviation") <= 1e-9);
}

TEST_CASE("IN diagnostic") {
  InDiagnosticConfig cyc;
  const Report rc = run_in_diagnostic(cyc);
  CHECK(rc.all_pass());

  InDiagnosticConfig line;
  line.model = {{"model", "line"}, {"half_width", 6.0}, {"step", 0.05}};
  const Report rl = run_in_diagnostic(line);
  CHECK(rl.all_pass());
  REQUIRE(rl.curves.size() == 1);
  for (const auto& p : rl.curves[0].points) CHECK(std::abs(p.value - 4.0) <= 3.0 * 0.05 + 1e-12);

  InDiagnosticConfig aff;
  aff.model = {{"model", "affine"}, {"x_half_width", 4.0}, {"x_step", 0.1}, {"a_min", 0.0078125},
               {"a_max", 4.0}, {"a_ratio", 1.1}};
  const Report ra = run_in_diagnostic(aff);
  CHECK(ra.all_pass());
  CHECK(value_of(ra, "growth") >= 3.0);
}

TEST_CASE("coorbit suites") {
  CoorbitNormConfig n;
  n.samples = 20;
  CHECK(run_coorbit_norm(n).all_pass());

  CoorbitEmbedConfig e;
  e.samples = 10;
  e.random_operators = 1;
  const Report r = run_coorbit_embed(e);
  CHECK(r.all_pass());
  CHECK(r.parameters.contains("calibration"));
  REQUIRE(r.curves.size() == 1);
  const auto& pts = r.curves[0].points;
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].value >= pts[i - 1].value);
}

TEST_CASE("determinism: identical configs give byte-identical JSON") {
  const json cfg = {{"N", 8}, {"samples", 15}, {"seed", 5}};
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  emit_report(run_command("coorbit", "norm", cfg), a.string());
  emit_report(run_command("coorbit", "norm", cfg), b.string());
  CHECK(slurp(a / "coorbit_norm.json") == slurp(b / "coorbit_norm.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("run_command dispatch") {
  CHECK(run_command("gabor", "riesz", json::object()).command == "gabor riesz");
  CHECK(run_command("diagnostic", "in-group", json::object()).command == "diagnostic in-group");
  CHECK_THROWS_AS(run_command("gabor", "sonata", json::object()), InvalidParameter);
  CHECK_THROWS_AS(run_command("counterexample", "realline", {{"step", -1.0}}), InvalidParameter);
}
